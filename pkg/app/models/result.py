import json
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class CommandOutcome(BaseModel):
    """Represents the outcome of one CLI command.

    Encapsulates the status, the structured payload (verdicts, witnesses,
    report lines) and a human-readable reason for failures and errors.
    """
    status: Literal["ok", "fail", "error"] = Field(default="ok", description="Outcome status")
    payload: Dict[str, Any] = Field(default_factory=dict, description="Structured result fields")
    reason: Optional[str] = Field(None, description="Why the command failed or errored")

    @model_validator(mode="after")
    def _check_reason(self) -> "CommandOutcome":
        if self.status != "ok" and not self.reason:
            raise ValueError(f"a '{self.status}' outcome needs a reason")
        return self

    @property
    def is_ok(self) -> bool:
        return self.status == "ok"

    @property
    def exit_code(self) -> int:
        """Process exit code: 0 ok, 1 fail, 2 error."""
        return {"ok": 0, "fail": 1, "error": 2}[self.status]

    def add_payload(self, key: str, value: Any) -> None:
        self.payload[key] = value

    @classmethod
    def ok_outcome(cls, payload: Optional[Dict[str, Any]] = None) -> "CommandOutcome":
        return cls(status="ok", payload=payload or {})

    @classmethod
    def fail_outcome(cls, reason: str, payload: Optional[Dict[str, Any]] = None) -> "CommandOutcome":
        return cls(status="fail", reason=reason, payload=payload or {})

    @classmethod
    def error_outcome(cls, message: str, reason: str, details: Optional[Dict] = None) -> "CommandOutcome":
        """Create an error outcome.

        Args:
            message: Short description of the failing step
            reason: Error text
            details: Optional structured error details

        Returns:
            Error outcome
        """
        payload: Dict[str, Any] = {"error": message}
        if details:
            payload["details"] = {k: str(v) for k, v in details.items()}
        return cls(status="error", reason=reason or message, payload=payload)

    def render(self, fmt: str = "text") -> str:
        """Serialize as `key: value` lines or as JSON."""
        if fmt == "json":
            return json.dumps(self.model_dump(), sort_keys=True, default=str, indent=2)
        lines = [f"status: {self.status}"]
        if self.reason:
            lines.append(f"reason: {self.reason}")
        for key, value in self.payload.items():
            if isinstance(value, list):
                for i, item in enumerate(value):
                    lines.append(f"{key}[{i}]: {item}")
            elif isinstance(value, dict):
                for sub, item in value.items():
                    lines.append(f"{key}.{sub}: {item}")
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines)


CheckStatus = Literal["exact-pass", "exact-fail", "sampled-pass", "sampled-fail"]


class CheckResult(BaseModel):
    """One line of a validation report."""
    name: str
    mode: Literal["exact", "sampled"]
    status: CheckStatus
    witness: Optional[str] = Field(None, description="Counterexample tuple, if the check failed")
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.status.endswith("pass")

    def line(self) -> str:
        text = f"{self.name} {self.mode} {self.status}"
        if self.samples:
            text += f" samples={self.samples}"
        if self.witness:
            text += f" witness={self.witness}"
        return text


class ValidationReport(BaseModel):
    """Checks run against a presentation, in execution order."""
    kind: Literal["word", "tree"]
    seed: Optional[int] = None
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> List[str]:
        return [c.line() for c in self.checks]


class SuiteReport(BaseModel):
    """Outcome of one differential-test suite run."""
    suite: str
    seed: int
    cases: int = 0
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, description: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(description)
