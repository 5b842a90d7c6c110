"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph input: bad endpoint, loop, duplicate edge, bad connection set."""


class BudgetExceeded(RuntimeError):
    """A computation would need more memory or search effort than allowed."""

    def __init__(self, what: str, required: int, available: int):
        self.what = what
        self.required = required
        self.available = available
        super().__init__(f"{what}: requires {required}, budget allows {available}")


class AssumptionViolated(ValueError):
    """A CFI template does not satisfy the regularity/connectivity/nu assumption."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        msg = f"template assumption violated: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CoherenceError(RuntimeError):
    """A stable 2-WL partition failed the coherent-configuration axioms."""
