from typing import Any, Callable, Dict, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr


class FrozenModel(BaseModel):
    """Immutable model with a private memo for derived tables.

    Equality and hashing look at the declared fields only, so memoized
    tables never influence comparisons.
    """
    model_config = ConfigDict(frozen=True)

    _memo: Dict[str, Any] = PrivateAttr(default_factory=dict)

    def _memoized(self, key: str, build: Callable[[], Any]) -> Any:
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    def _field_key(self) -> Tuple[Any, ...]:
        return tuple(getattr(self, name) for name in type(self).model_fields)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._field_key() == other._field_key()

    def __hash__(self) -> int:
        return hash((type(self).__name__,) + self._field_key())
