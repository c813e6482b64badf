"""Exception hierarchy shared across the package."""


class MolbenchError(Exception):
    """Base class for all molbench errors."""


# --- SMILES parsing ---------------------------------------------------------

class SmilesParseError(MolbenchError):
    """Parse failure; ``offset`` is the byte position inside the input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnbalancedBranch(SmilesParseError):
    pass


class UnclosedRing(SmilesParseError):
    pass


class UnknownElement(SmilesParseError):
    pass


class ValenceViolation(SmilesParseError):
    pass


# --- SELFIES codec ----------------------------------------------------------

class SelfiesError(MolbenchError):
    pass


class UnknownToken(SelfiesError):
    pass


class EmptyDecode(SelfiesError):
    """Decoding produced no atoms (empty string or all-ineffective tokens)."""


class UnsupportedFeature(SelfiesError):
    """Graph uses a construct outside the implemented SELFIES subset."""


# --- Fingerprints -----------------------------------------------------------

class WidthMismatch(MolbenchError):
    pass


# --- Depiction ---------------------------------------------------------------

class LayoutFailure(MolbenchError):
    pass


class UnsupportedSvgFeature(MolbenchError):
    pass


# --- Dataset curation --------------------------------------------------------

class MissingColumn(MolbenchError):
    pass


class EmptyFile(MolbenchError):
    pass


class TooFewRecords(MolbenchError):
    pass


# --- Prompt assembly ---------------------------------------------------------

class InsufficientExamples(MolbenchError):
    pass


class UnknownPlaceholder(MolbenchError):
    pass


class MissingTemplate(MolbenchError):
    pass


# --- Model client ------------------------------------------------------------

class ClientError(MolbenchError):
    pass


class RequestTimeout(ClientError):
    pass


class HttpStatus(ClientError):
    def __init__(self, code: int, message: str = ""):
        super().__init__(f"HTTP {code}{': ' + message if message else ''}")
        self.code = code


class RateLimited(HttpStatus):
    def __init__(self, message: str = ""):
        super().__init__(429, message)


class MalformedResponse(ClientError):
    pass


# --- Metrics / contrastive ---------------------------------------------------

class EmptyScoredSet(MolbenchError):
    pass


class ZeroVector(MolbenchError):
    pass


class DimensionMismatch(MolbenchError):
    pass


class NonFinite(MolbenchError):
    pass
