"""Exception hierarchy shared across the equinet package."""

from __future__ import annotations


class EquinetError(Exception):
    """Base class for all equinet errors."""


# --- ingest ---------------------------------------------------------------

class IngestError(EquinetError):
    """Base class for record-parsing failures."""


class MissingColumn(IngestError):
    def __init__(self, path, column):
        self.path = path
        self.column = column
        super().__init__(f"{path}: header is missing required column {column!r}")


class UnparsableValue(IngestError):
    def __init__(self, path, line, column, value):
        self.path = path
        self.line = line
        self.column = column
        self.value = value
        super().__init__(
            f"{path}:{line}: cannot parse {column}={value!r}"
        )


class RowInvariantViolation(IngestError):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


# --- graph ----------------------------------------------------------------

class GraphError(EquinetError):
    pass


class EdgeEndpointUnknown(GraphError):
    def __init__(self, firm_id):
        self.firm_id = firm_id
        super().__init__(f"edge references firm {firm_id!r} absent from the node universe")


class SelfLoopForbidden(GraphError):
    def __init__(self, firm_id):
        self.firm_id = firm_id
        super().__init__(f"self-loop on firm {firm_id!r} is not allowed")


# --- metrics --------------------------------------------------------------

class EmptyGraph(EquinetError):
    pass


class NoConvergence(EquinetError):
    def __init__(self, max_iter):
        self.max_iter = max_iter
        super().__init__(f"power iteration did not converge within {max_iter} iterations")


# --- community ------------------------------------------------------------

class InvalidAssignment(EquinetError):
    pass


class SingleClass(EquinetError):
    pass


# --- layout ---------------------------------------------------------------

class NonFiniteForce(EquinetError):
    def __init__(self, node, iteration):
        self.node = node
        self.iteration = iteration
        super().__init__(
            f"non-finite force on node {node!r} at iteration {iteration} (numerical blow-up)"
        )


class MissingPosition(EquinetError):
    def __init__(self, firm_id):
        self.firm_id = firm_id
        super().__init__(f"no position supplied for node {firm_id!r}")


# --- regression -----------------------------------------------------------

class RegressionError(EquinetError):
    pass


class ZeroVariance(RegressionError):
    pass


class RankDeficient(RegressionError):
    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(f"design matrix is rank deficient; collinear columns: {self.columns}")


class TooFewObservations(RegressionError):
    def __init__(self, n, k):
        self.n = n
        self.k = k
        super().__init__(f"{n} observations cannot identify {k} parameters")


class NonPositiveWeight(RegressionError):
    pass


class ZeroQuadratic(RegressionError):
    pass


class EmptyJoin(RegressionError):
    pass


class WeakInstrumentWarning(UserWarning):
    """First-stage partial F below the conventional threshold of 10."""


# --- pipeline -------------------------------------------------------------

class ConfigInvalid(EquinetError):
    def __init__(self, problems):
        self.problems = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"invalid run configuration:\n{lines}")


class StageError(EquinetError):
    def __init__(self, stage, window, cause):
        self.stage = stage
        self.window = window
        self.cause = cause
        where = f"stage {stage!r}" + (f" (window {window})" if window else "")
        super().__init__(f"{where} failed: {cause}")
