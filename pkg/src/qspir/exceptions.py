"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A dense register or an enumeration would exceed its configured cap."""


class InvariantViolation(AssertionError):
    """A checked protocol invariant did not hold.

    ``name`` identifies the failing assertion so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        self.detail = detail
        super().__init__(f"{name}: {detail}" if detail else name)
