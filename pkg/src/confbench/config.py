"""Service configuration, sourced from the environment or flags."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from . import cops
from .engine import DEFAULT_MAX_OUTPUT_BYTES
from .jobs import DEFAULT_CAPACITY, DEFAULT_TTL_S

DEFAULT_MAX_SOFT_TIMEOUT = 59.0
DEFAULT_MAX_UPLOAD_BYTES = 256 * 1024
DEFAULT_LISTEN_ADDR = "127.0.0.1:8080"


@dataclass
class Settings:
    config_root: Path
    bin_root: Path
    scratch_dir: Path
    static_dir: Path | None = None
    cops_base_url: str = cops.DEFAULT_BASE_URL
    cops_path_template: str = cops.DEFAULT_PATH_TEMPLATE
    max_soft_timeout: float = DEFAULT_MAX_SOFT_TIMEOUT
    reload_secret: str | None = None
    listen_addr: str = DEFAULT_LISTEN_ADDR
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES
    max_output_bytes: int = DEFAULT_MAX_OUTPUT_BYTES
    job_capacity: int = DEFAULT_CAPACITY
    job_ttl_s: float = DEFAULT_TTL_S

    @classmethod
    def from_env(cls, env: dict | None = None) -> "Settings":
        env = dict(os.environ if env is None else env)
        missing = [key for key in ("CONFIG_ROOT", "BIN_ROOT") if not env.get(key)]
        if missing:
            raise ValueError(f"missing required configuration: {', '.join(missing)}")
        settings = cls(
            config_root=Path(env["CONFIG_ROOT"]),
            bin_root=Path(env["BIN_ROOT"]),
            scratch_dir=Path(env.get("SCRATCH_DIR", "/tmp/confbench-scratch")),
        )
        if env.get("STATIC_DIR"):
            settings.static_dir = Path(env["STATIC_DIR"])
        if env.get("COPS_BASE_URL"):
            settings.cops_base_url = env["COPS_BASE_URL"]
        if env.get("COPS_PATH_TEMPLATE"):
            settings.cops_path_template = env["COPS_PATH_TEMPLATE"]
        if env.get("MAX_SOFT_TIMEOUT"):
            settings.max_soft_timeout = float(env["MAX_SOFT_TIMEOUT"])
        if env.get("RELOAD_SECRET"):
            settings.reload_secret = env["RELOAD_SECRET"]
        if env.get("LISTEN_ADDR"):
            settings.listen_addr = env["LISTEN_ADDR"]
        return settings

    @property
    def listen_host_port(self) -> tuple[str, int]:
        host, _, port = self.listen_addr.rpartition(":")
        return host or "127.0.0.1", int(port)
