"""Typed errors raised across the toolkit.

Everything that stems from bad input data or bad parameters derives from
ValidationError; the CLI maps those to exit code 2 and genuine I/O failures
(plain OSError) to exit code 1.
"""


class GazesimError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(GazesimError):
    """Input data or parameters violate a documented contract."""


# --- ingest ---------------------------------------------------------------

class MissingColumn(ValidationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"required column missing: {name}")


class MalformedRow(ValidationError):
    def __init__(self, line_no: int, reason: str = "inconsistent field count"):
        self.line_no = line_no
        super().__init__(f"malformed row at line {line_no}: {reason}")


class GeometryNotFound(ValidationError):
    def __init__(self):
        super().__init__("no DISPLAY_COORDS line found")


class RaggedRows(ValidationError):
    def __init__(self, line_no: int, expected: int, got: int):
        self.line_no = line_no
        super().__init__(
            f"row at line {line_no} has {got} fields, expected {expected}"
        )


class EmptyInput(ValidationError):
    def __init__(self, what: str = "input"):
        super().__init__(f"empty {what}")


class NonBooleanCell(ValidationError):
    def __init__(self, row: int, col: int, value: str):
        self.row = row
        self.col = col
        super().__init__(f"non-boolean cell at row {row}, col {col}: {value!r}")


# --- preprocess -----------------------------------------------------------

class OverlappingFixations(ValidationError):
    def __init__(self, first_end_ms: int, second_start_ms: int):
        super().__init__(
            f"fixations overlap by more than one sample period: "
            f"[..,{first_end_ms}) vs [{second_start_ms},..)"
        )


class EmptySeries(ValidationError):
    def __init__(self, what: str = "series"):
        super().__init__(f"empty {what}")


class AllExcluded(ValidationError):
    def __init__(self, threshold: float):
        super().__init__(f"no viewer has missing ratio <= {threshold}")


class UpsampleRequested(ValidationError):
    def __init__(self, source_fps: float, target_fps: float):
        super().__init__(
            f"target rate {target_fps} exceeds source rate {source_fps}"
        )


# --- elastic / simmatrix --------------------------------------------------

class LengthMismatch(ValidationError):
    def __init__(self, len_a: int, len_b: int):
        super().__init__(f"series lengths differ: {len_a} vs {len_b}")


class TooFewViewers(ValidationError):
    def __init__(self, n: int):
        super().__init__(f"need at least 2 viewers, got {n}")


class NegativeDistance(ValidationError):
    def __init__(self, i: int, j: int, value: float):
        super().__init__(f"negative distance at ({i},{j}): {value}")


class WindowOutOfRange(ValidationError):
    def __init__(self, start_s: float, length_s: float, duration_s: float):
        self.start_s = start_s
        self.length_s = length_s
        super().__init__(
            f"window [{start_s}s, {start_s + length_s}s) outside the "
            f"{duration_s}s recording"
        )


# --- cluster --------------------------------------------------------------

class EmptyGraph(ValidationError):
    def __init__(self):
        super().__init__("graph has no nodes")


class NotNeighbor(ValidationError):
    def __init__(self, node: str, community: int):
        super().__init__(
            f"node {node!r} shares no positive-weight edge with community "
            f"{community}"
        )


# --- analysis -------------------------------------------------------------

class UnknownQuestion(ValidationError):
    def __init__(self, question_id: str):
        super().__init__(f"unknown question id: {question_id!r}")


class UnknownViewer(ValidationError):
    def __init__(self, viewer_id: str):
        super().__init__(f"unknown viewer id: {viewer_id!r}")


class ViewerMismatch(ValidationError):
    def __init__(self):
        super().__init__("viewer orderings of the two matrices differ")
