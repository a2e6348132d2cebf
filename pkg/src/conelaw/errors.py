class ContractError(ValueError):
    """A caller broke an operation's precondition."""


class DomainError(ValueError):
    """A field was evaluated outside its region."""


class RegionTooThinError(RuntimeError):
    """Rejection sampling accepted too few candidates to be useful."""
