"""Shared error types for search operations with configured scale caps."""


class ScaleExceeded(RuntimeError):
    """An exhaustive search ran past its configured desk-scale cap.

    Raised instead of running unbounded; the CLI maps this to exit 3.
    """

    def __init__(self, op: str, detail: str):
        super().__init__(f"{op}: scale cap exceeded ({detail})")
        self.op = op
        self.detail = detail
