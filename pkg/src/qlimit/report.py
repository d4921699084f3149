"""Check reports and their two text renderings."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

_FIELDS = ("check", "status", "witness", "residual", "degree_bound", "confluence_status",
           "runtime_ms")


@dataclass
class CheckReport:
    check: str
    status: str
    witness: str | None = None
    residual: float | None = None
    degree_bound: int | None = None
    confluence_status: str | None = None
    runtime_ms: float | None = None
    details: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError(f"{self.check}: FAIL requires a witness")
        if self.status == INCONCLUSIVE and self.degree_bound is None and "bound" not in self.data:
            raise ValueError(f"{self.check}: INCONCLUSIVE requires the exhausted bound")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def fields(self) -> dict:
        out = {}
        for k in _FIELDS:
            v = getattr(self, k)
            if v is None:
                continue
            if k == "residual":
                v = f"{v:.3e}"
            elif k == "runtime_ms":
                v = f"{v:.1f}"
            out[k] = v
        for k, v in self.data.items():
            out[k] = v
        return out

    def record(self) -> str:
        return " ".join(f"{k}={_quote(v)}" for k, v in self.fields().items())

    def text(self) -> str:
        lines = [f"[{self.status}] {self.check}"]
        for k, v in self.fields().items():
            if k in ("check", "status"):
                continue
            lines.append(f"    {k}: {v}")
        lines.extend(f"    | {d}" for d in self.details)
        return "\n".join(lines)


def _quote(v) -> str:
    s = str(v)
    if not s or any(c in s for c in " =\"\t"):
        s = '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return s


def combine(check: str, parts: list[CheckReport], **kw) -> CheckReport:
    """Aggregate sub-reports: FAIL beats INCONCLUSIVE beats PASS."""
    fails = [p for p in parts if p.status == FAIL]
    inconcl = [p for p in parts if p.status == INCONCLUSIVE]
    if fails:
        status, witness = FAIL, f"{fails[0].check}: {fails[0].witness}"
    elif inconcl:
        status, witness = INCONCLUSIVE, None
    else:
        status, witness = PASS, None
    details = [f"{p.status} {p.check}" for p in parts]
    rep = CheckReport(check, status, witness=witness, details=details,
                      data={"subchecks": len(parts), **({"bound": "subcheck"} if inconcl else {})},
                      **kw)
    return rep


@contextmanager
def timed():
    box = {}
    t0 = time.perf_counter()
    yield box
    box["ms"] = (time.perf_counter() - t0) * 1000.0


def exit_code(reports: list[CheckReport]) -> int:
    if any(r.status == FAIL for r in reports):
        return 1
    if any(r.status == INCONCLUSIVE for r in reports):
        return 3
    return 0
