"""Client for fetching problems from the remote Cops database by number.

Fetched problem text is cached for the lifetime of the process (the
database is append-only by convention, so entries never change), and
concurrent requests for the same number are collapsed into a single
upstream fetch.  Failures are never cached.
"""

from __future__ import annotations

import threading

import requests

DEFAULT_BASE_URL = "https://cops.uibk.ac.at"
DEFAULT_PATH_TEMPLATE = "/problems/{number}.trs"
FETCH_TIMEOUT_S = 10.0


class CopsFetchError(RuntimeError):
    """The remote database did not yield problem text."""


class CopsClient:
    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        path_template: str = DEFAULT_PATH_TEMPLATE,
        timeout_s: float = FETCH_TIMEOUT_S,
        session: requests.Session | None = None,
    ):
        self._base_url = base_url.rstrip("/")
        self._path_template = path_template
        self._timeout_s = timeout_s
        self._session = session or requests.Session()
        self._cache: dict[int, str] = {}
        self._locks: dict[int, threading.Lock] = {}
        self._guard = threading.Lock()

    def url_for(self, number: int) -> str:
        return self._base_url + self._path_template.format(number=number)

    def cached(self, number: int) -> bool:
        with self._guard:
            return number in self._cache

    def fetch(self, number: int) -> str:
        """Return the problem text for a database number.

        Cache hits cost no network call.  Raises CopsFetchError on a
        non-200 response, an empty body, or any transport failure
        (including the 10 s timeout).
        """
        if number < 1:
            raise ValueError(f"problem number must be >= 1, got {number}")
        with self._guard:
            lock = self._locks.setdefault(number, threading.Lock())
        # Per-number lock: concurrent fetches of the same number wait for
        # the first one and then hit the cache.
        with lock:
            with self._guard:
                if number in self._cache:
                    return self._cache[number]
            url = self.url_for(number)
            try:
                response = self._session.get(url, timeout=self._timeout_s)
            except requests.RequestException as exc:
                raise CopsFetchError(f"fetching {url} failed: {exc}") from exc
            if response.status_code != 200:
                raise CopsFetchError(
                    f"fetching {url} failed: HTTP {response.status_code}"
                )
            text = response.text
            if not text:
                raise CopsFetchError(f"fetching {url} returned an empty body")
            with self._guard:
                self._cache[number] = text
            return text
