"""
RunConfig — one place for every run-wide setting.

Layering (lowest -> highest): defaults, .env in the project directory,
COMPACT3_* environment variables, command-line flags.
"""

import os
from dataclasses import asdict, dataclass, fields
from typing import Optional

from errors import UsageError

ENV_PREFIX = "COMPACT3_"

_PROJECT_DIR = os.path.dirname(os.path.abspath(__file__))


def load_env_file(path: Optional[str] = None) -> None:
    try:
        from dotenv import load_dotenv
        load_dotenv(path or os.path.join(_PROJECT_DIR, ".env"))
    except ImportError:
        pass  # plain environment variables still apply


@dataclass
class RunConfig:
    digits: int = 50
    jobs: int = 1
    budget_nodes: int = 10 ** 9
    term_cap: int = 5_000_000
    out_dir: str = "runs"
    fmt: str = "json"
    tolerance: str = "1e-20"
    seed: int = 0
    log_level: str = "INFO"

    # env name suffix per field, where it differs from the upper-cased name
    _ENV_NAMES = {"out_dir": "OUT", "fmt": "FORMAT"}

    @classmethod
    def from_env(cls, environ: Optional[dict] = None) -> "RunConfig":
        environ = os.environ if environ is None else environ
        cfg = cls()
        for f in fields(cls):
            name = ENV_PREFIX + cls._ENV_NAMES.get(f.name, f.name.upper())
            if name in environ:
                cfg._set(f.name, environ[name], source=name)
        return cfg

    def _set(self, name: str, raw, source: str) -> None:
        current = getattr(self, name)
        try:
            value = int(raw) if isinstance(current, int) else str(raw)
        except ValueError:
            raise UsageError(f"{source}: expected an integer, got {raw!r}") from None
        setattr(self, name, value)

    def override(self, **flags) -> "RunConfig":
        """Apply CLI flags; None means 'not given'."""
        for name, value in flags.items():
            if value is not None and hasattr(self, name):
                self._set(name, value, source=f"--{name.replace('_', '-')}")
        return self

    def validate(self) -> "RunConfig":
        if self.digits < 30:
            raise UsageError(f"digits must be >= 30, got {self.digits}")
        if self.jobs < 1:
            raise UsageError(f"jobs must be >= 1, got {self.jobs}")
        if self.budget_nodes < 1:
            raise UsageError(f"budget-nodes must be >= 1, got {self.budget_nodes}")
        if self.term_cap < 1:
            raise UsageError(f"term-cap must be >= 1, got {self.term_cap}")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"Unknown format {self.fmt!r}. Valid formats: ['json', 'csv']")
        try:
            float(self.tolerance)
        except ValueError:
            raise UsageError(f"tolerance must be a decimal number, got {self.tolerance!r}") from None
        return self

    def to_record(self) -> dict:
        return asdict(self)
