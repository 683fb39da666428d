"""Check records shared by the verification suites and the command line."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass
class CheckResult:
    check_name: str
    parameters: dict = field(default_factory=dict)
    defect_norm: float = 0.0
    rank: Optional[int] = None
    status: str = "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return asdict(self)


def verdict(name: str, params: dict, defect: float, tol: float, rank: Optional[int] = None,
            expected_rank: Optional[int] = None, max_rank: Optional[int] = None) -> CheckResult:
    ok = defect <= tol
    if expected_rank is not None:
        ok = ok and rank == expected_rank
    if max_rank is not None:
        ok = ok and rank is not None and rank <= max_rank
    return CheckResult(name, params, float(defect), rank, "pass" if ok else "fail")


def all_passed(results) -> bool:
    return all(r.passed for r in results)
