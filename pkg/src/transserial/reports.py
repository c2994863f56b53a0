"""Validation reports with a stable JSON shape."""

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.failures

    def fail(self, witness, **info):
        self.failures.append({"witness": witness, **info})

    def failed_conditions(self):
        return sorted({f.get("condition", "") for f in self.failures})

    def merge(self, other):
        self.checked += other.checked
        self.failures.extend(other.failures)
        return self

    def to_json(self):
        return {
            "name": self.name,
            "checked": self.checked,
            "ok": self.ok,
            "failures": [dict(f, witness=_plain(f["witness"])) for f in self.failures],
            "params": {k: _plain(v) for k, v in self.params.items()},
        }

    def summary(self):
        status = "pass" if self.ok else f"FAIL ({len(self.failures)} failures)"
        return f"{self.name}: {status}, {self.checked} checks"


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (int, str, float, bool)) or v is None:
        return v
    return str(v)
