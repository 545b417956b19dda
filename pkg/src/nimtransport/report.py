"""Check reports and exact JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .dyadic import Dyadic, format_rational


@dataclass
class Report:
    """Outcome of one named verification.

    ``violations`` holds one dict per failed assertion; ``values`` carries
    exact quantities worth printing.  ``asserted=False`` marks exploratory
    checks whose outcome is recorded but never fails a run.
    """

    name: str
    checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    asserted: bool = True

    @property
    def passed(self) -> bool:
        return not self.asserted or not self.violations

    def fail(self, **info: Any) -> None:
        self.violations.append(info)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "asserted": self.asserted,
            "checked": self.checked,
            "violations": to_jsonable(self.violations),
            "values": to_jsonable(self.values),
        }


def to_jsonable(obj: Any) -> Any:
    """Recursively turn exact numbers into "p/q" strings.

    Plain ints stay ints (counts, indices); floats are rejected.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, Dyadic)):
        return format_rational(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if hasattr(obj, "item"):  # numpy integer scalars
        return to_jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"
