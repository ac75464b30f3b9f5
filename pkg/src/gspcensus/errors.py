class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration refused because it would exceed the work budget."""

    def __init__(self, what: str, cost: int, budget: int):
        super().__init__(f"{what}: estimated cost {cost} exceeds budget {budget}")
        self.cost = cost
        self.budget = budget


class ConsistencyError(ArithmeticError):
    """An identity that must hold exactly (e.g. an exact division) failed."""
