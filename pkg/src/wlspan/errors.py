"""Exception hierarchy. Every domain error carries a stable ``code`` string."""


class WlspanError(Exception):
    code = "Domain"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        return out


def _plain(v):
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_plain(x) for x in v]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def _make(name, base=WlspanError):
    return type(name, (base,), {"code": name})


# graph core
SelfLoop = _make("SelfLoop")
ParallelEdge = _make("ParallelEdge")
DanglingEndpoint = _make("DanglingEndpoint")
NonPlanarRotation = _make("NonPlanarRotation")

# levelings and drawings
MissingLevel = _make("MissingLevel")
InconsistentSubdivision = _make("InconsistentSubdivision")
NonMonotoneEdge = _make("NonMonotoneEdge")
CoincidentPoints = _make("CoincidentPoints")
InvalidInput = _make("InvalidInput")
NotCoFacial = _make("NotCoFacial")
Disconnected = _make("Disconnected")

# solver
SizeCapExceeded = _make("SizeCapExceeded")
NonPlanarInput = _make("NonPlanarInput")

# cycle-trees
NotCycleTree = _make("NotCycleTree")
NotAlmost3Connected = _make("NotAlmost3Connected")
NotInternallyTriangulated = _make("NotInternallyTriangulated")
InadmissibleTemplate = _make("InadmissibleTemplate")
FrameMismatch = _make("FrameMismatch")
Not3Connected = _make("Not3Connected")
CorridorTooShort = _make("CorridorTooShort")
BudgetExceeded = _make("BudgetExceeded")

# kernels
InvalidCover = _make("InvalidCover")
NoSiblingFound = _make("NoSiblingFound")
TooManyAttachments = _make("TooManyAttachments")
InvalidModulator = _make("InvalidModulator")
InvalidDecomposition = _make("InvalidDecomposition")

# generators
BadParams = _make("BadParams")
NotBipartite = _make("NotBipartite")
NotPlanar = _make("NotPlanar")
TooSmall = _make("TooSmall")
GenerationFailed = _make("GenerationFailed")
