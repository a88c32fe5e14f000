from pathlib import Path

import pytest

from confbench.config import Settings


def test_required_roots():
    with pytest.raises(ValueError, match="CONFIG_ROOT"):
        Settings.from_env({"BIN_ROOT": "/x"})
    with pytest.raises(ValueError, match="BIN_ROOT"):
        Settings.from_env({"CONFIG_ROOT": "/x"})


def test_defaults_and_overrides():
    settings = Settings.from_env(
        {
            "CONFIG_ROOT": "/cfg",
            "BIN_ROOT": "/bin",
            "SCRATCH_DIR": "/scratch",
            "STATIC_DIR": "/static",
            "COPS_BASE_URL": "http://db.example",
            "COPS_PATH_TEMPLATE": "/p/{number}",
            "MAX_SOFT_TIMEOUT": "30",
            "RELOAD_SECRET": "hush",
            "LISTEN_ADDR": "0.0.0.0:9000",
        }
    )
    assert settings.config_root == Path("/cfg")
    assert settings.static_dir == Path("/static")
    assert settings.cops_base_url == "http://db.example"
    assert settings.max_soft_timeout == 30.0
    assert settings.reload_secret == "hush"
    assert settings.listen_host_port == ("0.0.0.0", 9000)


def test_minimal_env_uses_defaults():
    settings = Settings.from_env({"CONFIG_ROOT": "/cfg", "BIN_ROOT": "/bin"})
    assert settings.max_soft_timeout == 59.0
    assert settings.reload_secret is None
    assert settings.static_dir is None
    assert settings.listen_host_port == ("127.0.0.1", 8080)
