class GuardrailExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured item budget."""

    def __init__(self, what: str, required: int, limit: int):
        super().__init__(f"enumerating {what} needs {required} items, guardrail is {limit}")
        self.what = what
        self.required = required
        self.limit = limit


class NotSelfsufficient(ValueError):
    """An operation requiring a selfsufficient base subspace got one that is not."""


class FormulaMismatch(AssertionError):
    """Two routes to the same quantity disagreed."""
