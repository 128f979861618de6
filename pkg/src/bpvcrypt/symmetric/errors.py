class InvalidTag(Exception):
    """Authentication failed.  Carries no detail about why."""

    def __init__(self) -> None:
        super().__init__("INVALID")
