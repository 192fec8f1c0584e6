"""Cross-section assembly, least-squares estimators and specification tests.

Estimators solve the normal equations through a pivoted QR decomposition;
rank is decided by a relative diagonal tolerance, and rank deficiency
reports the offending columns by name (which is how the dummy trap
surfaces).  "Robust" standard errors are the HC1 sandwich
``n/(n-k) * (X'X)^-1 X' diag(e^2) X (X'X)^-1`` (HC0 drops the small-sample
factor).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, stats

from .errors import (
    EmptyJoin,
    NonPositiveWeight,
    RankDeficient,
    TooFewObservations,
    WeakInstrumentWarning,
    ZeroQuadratic,
    ZeroVariance,
)

__all__ = [
    "FirmObservation",
    "CrossSection",
    "ModelSpec",
    "ModelResult",
    "TestResult",
    "DWHResult",
    "standardize",
    "build_cross_section",
    "design_matrix",
    "ols",
    "wls",
    "tsls",
    "bp_test",
    "reset_test",
    "dwh_test",
    "correlation_matrix",
    "turning_point",
    "parse_model_spec",
    "run_model",
]

DEFAULT_RANK_TOL = 1e-10


def standardize(values) -> np.ndarray:
    """Z-scores with the sample (n-1) standard deviation.

    Means and variances are accumulated with ``math.fsum`` so the result
    does not depend on summation order.
    """
    x = [float(v) for v in values]
    n = len(x)
    if n < 2:
        raise ZeroVariance("standardization needs at least two values")
    mean = math.fsum(x) / n
    var = math.fsum((v - mean) ** 2 for v in x) / (n - 1)
    if var == 0.0:
        raise ZeroVariance("cannot standardize a constant vector")
    sd = math.sqrt(var)
    return np.array([(v - mean) / sd for v in x])


@dataclass(frozen=True, slots=True)
class FirmObservation:
    firm_id: str
    y: float
    log_v: float
    log_npp: float
    npf_d: float
    npf_d_sq: float
    trading_amount: float
    degree: float
    betweenness: float
    clustering_coefficient: float
    eigenvector: float
    closeness: float
    eccentricity: float
    class_dummies: tuple


@dataclass(frozen=True)
class CrossSection:
    observations: list
    dummy_classes: list       # class index behind each dummy slot
    baseline_class: int
    drops: dict               # reason -> count


def build_cross_section(market_averages, financials, node_metrics, partition, window):
    """Inner-join all per-firm sources for one window into observations.

    Firms missing any source are dropped and counted by the first missing
    source; non-positive log inputs (market value, net assets) are dropped
    and counted too.  Net profit is standardized on the surviving sample,
    after which the baseline (largest) community class is encoded away
    into m-1 dummies.
    """
    fins = {}
    for record in financials:
        current = fins.get(record.firm_id)
        if current is None or record.quarter > current.quarter:
            fins[record.firm_id] = record

    drops = {
        "missing market": 0,
        "missing financials": 0,
        "missing metrics": 0,
        "non-positive market value": 0,
        "non-positive net assets": 0,
    }
    rows = []
    for firm_id in sorted(partition.assignment):
        market = market_averages.get(firm_id)
        if market is None:
            drops["missing market"] += 1
            continue
        fin = fins.get(firm_id)
        if fin is None:
            drops["missing financials"] += 1
            continue
        nm = node_metrics.get(firm_id)
        if nm is None:
            drops["missing metrics"] += 1
            continue
        if market.market_value <= 0:
            drops["non-positive market value"] += 1
            continue
        if fin.net_assets <= 0:
            drops["non-positive net assets"] += 1
            continue
        rows.append((firm_id, market, fin, nm))

    if not rows:
        raise EmptyJoin(f"no complete observations for window {window.label!r}")

    npf = standardize([fin.net_profit for _, _, fin, _ in rows])

    sizes = partition.class_sizes
    baseline = min(c for c, s in sizes.items() if s == max(sizes.values()))
    from .community import dummy_encode
    from .errors import SingleClass

    try:
        dummy_classes, vectors = dummy_encode(partition, baseline)
    except SingleClass:
        dummy_classes, vectors = [], {f: () for f in partition.assignment}

    observations = []
    for i, (firm_id, market, fin, nm) in enumerate(rows):
        observations.append(
            FirmObservation(
                firm_id=firm_id,
                y=market.monthly_return,
                log_v=math.log(market.market_value),
                log_npp=math.log(fin.net_assets),
                npf_d=float(npf[i]),
                npf_d_sq=float(npf[i]) ** 2,
                trading_amount=market.trading_amount,
                degree=float(nm.degree),
                betweenness=nm.betweenness,
                clustering_coefficient=nm.clustering_coefficient,
                eigenvector=nm.eigenvector,
                closeness=nm.closeness,
                eccentricity=float(nm.eccentricity),
                class_dummies=vectors[firm_id],
            )
        )
    return CrossSection(observations, dummy_classes, baseline, drops)


@dataclass(frozen=True)
class ModelSpec:
    dependent: str
    regressors: tuple
    intercept: bool = True
    se_type: str = "robust-HC1"   # or "classical", "robust-HC0"
    weights: str | None = None
    instruments: tuple | None = None  # (endogenous field, (instrument fields...))

    def __post_init__(self):
        if self.instruments is not None:
            endog, ivs = self.instruments
            if len(ivs) < 1:
                raise ValueError(
                    f"order condition: endogenous {endog!r} needs at least one instrument"
                )


def parse_model_spec(text: str) -> ModelSpec:
    """Parse the plain-text model format: one regressor per line plus
    ``@dependent``, ``@se``, ``@weights``, ``@instrument`` and
    ``@intercept`` directive lines."""
    dependent = None
    regressors = []
    intercept = True
    se_type = "robust-HC1"
    weights = None
    instruments = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            parts = line.split()
            directive = parts[0]
            if directive == "@dependent" and len(parts) == 2:
                dependent = parts[1]
            elif directive == "@se" and len(parts) == 2:
                se_type = parts[1]
            elif directive == "@weights" and len(parts) == 2:
                weights = parts[1]
            elif directive == "@instrument" and len(parts) >= 3:
                instruments = (parts[1], tuple(parts[2:]))
            elif directive == "@intercept" and len(parts) == 2:
                intercept = parts[1].lower() not in ("off", "no", "false", "0")
            else:
                raise ValueError(f"bad model directive: {raw!r}")
        else:
            regressors.append(line)
    if dependent is None:
        raise ValueError("model spec needs a @dependent directive")
    if not regressors:
        raise ValueError("model spec needs at least one regressor line")
    return ModelSpec(
        dependent=dependent,
        regressors=tuple(regressors),
        intercept=intercept,
        se_type=se_type,
        weights=weights,
        instruments=instruments,
    )


def design_matrix(cross_section: CrossSection, spec: ModelSpec):
    """Expand a ModelSpec into (X, y, names); ``class_dummies`` expands to
    one ``dummy_<class>`` column per non-baseline class."""
    obs = cross_section.observations
    names = []
    columns = []
    if spec.intercept:
        names.append("const")
        columns.append([1.0] * len(obs))
    for regressor in spec.regressors:
        if regressor == "class_dummies":
            for slot, cls in enumerate(cross_section.dummy_classes):
                names.append(f"dummy_{cls}")
                columns.append([float(o.class_dummies[slot]) for o in obs])
        else:
            names.append(regressor)
            columns.append([float(getattr(o, regressor)) for o in obs])
    X = np.column_stack(columns) if columns else np.empty((len(obs), 0))
    y = np.array([float(getattr(o, spec.dependent)) for o in obs])
    return X, y, names


@dataclass
class ModelResult:
    names: list
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    r_squared: float
    f_stat: float | None
    f_dof: tuple | None
    residuals: np.ndarray
    fitted: np.ndarray
    n: int
    df_resid: int
    se_type: str
    cov: np.ndarray = field(repr=False, default=None)
    X: np.ndarray = field(repr=False, default=None)
    y: np.ndarray = field(repr=False, default=None)
    has_intercept: bool = True
    method: str = "ols"
    # 2SLS extras
    first_stage_r2: float | None = None
    first_stage_f: float | None = None
    first_stage_f_dof: tuple | None = None
    wald_chi2: float | None = None
    wald_dof: int | None = None

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])


def _qr_solve(X, y, names, rank_tol):
    """Least squares via pivoted QR with explicit rank policing.

    Returns (beta, xtx_inv).  Raises RankDeficient naming the columns the
    pivoting pushed past the numerical rank.
    """
    n, k = X.shape
    if n <= k:
        raise TooFewObservations(n, k)
    q, r, piv = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    cutoff = rank_tol * diag.max() if diag.size else 0.0
    rank = int(np.sum(diag > cutoff))
    if rank < k:
        raise RankDeficient([names[i] for i in sorted(piv[rank:])])
    z = linalg.solve_triangular(r, q.T @ y)
    beta = np.empty(k)
    beta[piv] = z
    r_inv = linalg.solve_triangular(r, np.eye(k))
    m = r_inv @ r_inv.T
    xtx_inv = np.empty((k, k))
    xtx_inv[np.ix_(piv, piv)] = m
    return beta, xtx_inv


def _covariance(X, residuals, xtx_inv, se_type):
    n, k = X.shape
    if se_type == "classical":
        sigma2 = float(residuals @ residuals) / (n - k)
        return sigma2 * xtx_inv
    if se_type in ("robust-HC1", "robust-HC0"):
        meat = (X * (residuals**2)[:, None]).T @ X
        cov = xtx_inv @ meat @ xtx_inv
        if se_type == "robust-HC1":
            cov = cov * (n / (n - k))
        return cov
    raise ValueError(f"unknown se_type {se_type!r}")


def _detect_intercept(X) -> bool:
    for j in range(X.shape[1]):
        col = X[:, j]
        if col[0] != 0 and np.all(col == col[0]):
            return True
    return False


def _finish(names, beta, cov, X, y, fitted, residuals, se_type, has_intercept,
            method):
    n, k = X.shape
    df_resid = n - k
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.inf)
    p = 2 * stats.t.sf(np.abs(t), df_resid)
    tss = float(((y - y.mean()) ** 2).sum()) if has_intercept else float((y**2).sum())
    ssr = float(residuals @ residuals)
    r2 = 1.0 - ssr / tss if tss > 0 else 0.0
    f_stat = None
    f_dof = None
    if has_intercept and k > 1:
        slopes = [i for i, name in enumerate(names) if name != "const"]
        beta_s = beta[slopes]
        cov_s = cov[np.ix_(slopes, slopes)]
        wald = float(beta_s @ np.linalg.solve(cov_s, beta_s))
        f_stat = wald / len(slopes)
        f_dof = (len(slopes), df_resid)
    result = ModelResult(
        names=list(names),
        coefficients=beta,
        standard_errors=se,
        t_stats=t,
        p_values=p,
        r_squared=r2,
        f_stat=f_stat,
        f_dof=f_dof,
        residuals=residuals,
        fitted=fitted,
        n=n,
        df_resid=df_resid,
        se_type=se_type,
        cov=cov,
        X=X,
        y=y,
        has_intercept=has_intercept,
        method=method,
    )
    return result


def ols(X, y, se_type="robust-HC1", names=None, rank_tol=DEFAULT_RANK_TOL) -> ModelResult:
    """Ordinary least squares with classical or heteroscedasticity-robust
    covariance.

    Parameters
    ----------
    X : (n, k) design matrix, intercept column included by the caller.
    y : (n,) dependent variable.
    se_type : "robust-HC1" (default), "robust-HC0" or "classical".
    names : column names for reporting; positional indices otherwise.

    The all-slopes-zero F statistic is the Wald form under the chosen
    covariance, with (k-1, n-k) degrees of freedom.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    names = list(names) if names is not None else [f"x{i}" for i in range(X.shape[1])]
    beta, xtx_inv = _qr_solve(X, y, names, rank_tol)
    fitted = X @ beta
    residuals = y - fitted
    cov = _covariance(X, residuals, xtx_inv, se_type)
    return _finish(
        names, beta, cov, X, y, fitted, residuals, se_type,
        _detect_intercept(X), "ols",
    )


def wls(X, y, weights, se_type="robust-HC1", names=None, rank_tol=DEFAULT_RANK_TOL) -> ModelResult:
    """Weighted least squares, equivalent to OLS on sqrt(weight)-scaled rows.

    Unit weights reproduce ``ols`` exactly; fitted values and residuals are
    reported on the original scale.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise NonPositiveWeight("weights must be strictly positive")
    names = list(names) if names is not None else [f"x{i}" for i in range(X.shape[1])]
    sw = np.sqrt(w)
    Xw = X * sw[:, None]
    yw = y * sw
    beta, xtx_inv = _qr_solve(Xw, yw, names, rank_tol)
    residuals_w = yw - Xw @ beta
    cov = _covariance(Xw, residuals_w, xtx_inv, se_type)
    result = _finish(
        names, beta, cov, Xw, yw, Xw @ beta, residuals_w, se_type,
        _detect_intercept(X), "wls",
    )
    # R^2, F and the covariance come from the weighted problem; fitted
    # values and residuals are reported on the original scale.
    result.X = X
    result.y = y
    result.fitted = X @ beta
    result.residuals = y - result.fitted
    return result


def tsls(X, y, endogenous, instruments, se_type="robust-HC1", names=None,
         rank_tol=DEFAULT_RANK_TOL) -> ModelResult:
    """Two-stage least squares for a single endogenous column.

    Stage 1 regresses the endogenous column on the exogenous columns plus
    the instruments; stage 2 replaces it with fitted values.  The
    coefficient covariance uses stage-2 residuals computed against the
    ORIGINAL regressors.  A first-stage partial F below 10 raises a
    WeakInstrumentWarning.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = np.asarray(instruments, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    names = list(names) if names is not None else [f"x{i}" for i in range(X.shape[1])]
    if isinstance(endogenous, str):
        endog_idx = names.index(endogenous)
    else:
        endog_idx = int(endogenous)

    exog_idx = [i for i in range(X.shape[1]) if i != endog_idx]
    W = np.column_stack([X[:, exog_idx], Z])
    x_e = X[:, endog_idx]
    # redundant instruments leave the projection onto col(W) unique, so the
    # first stage runs through rank-tolerant least squares
    pi, _, rank_w, _ = np.linalg.lstsq(W, x_e, rcond=None)
    first_fitted = W @ pi
    first_resid = x_e - first_fitted

    # first-stage fit and instrument-exclusion partial F
    tss1 = float(((x_e - x_e.mean()) ** 2).sum())
    ssr1 = float(first_resid @ first_resid)
    first_r2 = 1.0 - ssr1 / tss1 if tss1 > 0 else 0.0
    X_exog = X[:, exog_idx]
    if X_exog.shape[1] > 0:
        resid_r = x_e - X_exog @ np.linalg.lstsq(X_exog, x_e, rcond=None)[0]
    else:
        resid_r = x_e
    ssr_r = float(resid_r @ resid_r)
    q_iv = Z.shape[1]
    df1 = X.shape[0] - int(rank_w)
    if ssr1 > 0 and df1 > 0:
        first_f = ((ssr_r - ssr1) / q_iv) / (ssr1 / df1)
    else:
        first_f = float("inf")
    if first_f < 10:
        warnings.warn(
            f"first-stage partial F = {first_f:.3f} < 10: instruments may be weak",
            WeakInstrumentWarning,
            stacklevel=2,
        )

    X_hat = X.copy()
    X_hat[:, endog_idx] = first_fitted
    beta, xtx_inv = _qr_solve(X_hat, y, names, rank_tol)
    fitted = X @ beta
    residuals = y - fitted
    cov = _covariance_tsls(X_hat, residuals, xtx_inv, se_type)

    has_intercept = _detect_intercept(X)
    result = _finish(
        names, beta, cov, X, y, fitted, residuals, se_type,
        has_intercept, "2sls",
    )
    slopes = [i for i, name in enumerate(names) if name != "const"]
    if slopes and has_intercept:
        beta_s = beta[slopes]
        cov_s = cov[np.ix_(slopes, slopes)]
        result.wald_chi2 = float(beta_s @ np.linalg.solve(cov_s, beta_s))
        result.wald_dof = len(slopes)
    result.first_stage_r2 = first_r2
    result.first_stage_f = first_f
    result.first_stage_f_dof = (q_iv, df1)
    return result


def _covariance_tsls(X_hat, residuals, xtx_inv, se_type):
    n, k = X_hat.shape
    if se_type == "classical":
        sigma2 = float(residuals @ residuals) / (n - k)
        return sigma2 * xtx_inv
    if se_type in ("robust-HC1", "robust-HC0"):
        meat = (X_hat * (residuals**2)[:, None]).T @ X_hat
        cov = xtx_inv @ meat @ xtx_inv
        if se_type == "robust-HC1":
            cov = cov * (n / (n - k))
        return cov
    raise ValueError(f"unknown se_type {se_type!r}")


@dataclass(frozen=True, slots=True)
class TestResult:
    name: str
    statistic: float
    dof: tuple            # (numerator,) for chi2, (num, den) for F
    p_value: float


def _aux_r_squared(z, e2):
    """Centered R^2 of the auxiliary regression of e^2 on [1, z]."""
    n = z.shape[0]
    A = np.column_stack([np.ones(n), z])
    coef, *_ = np.linalg.lstsq(A, e2, rcond=None)
    resid = e2 - A @ coef
    tss = float(((e2 - e2.mean()) ** 2).sum())
    if tss == 0:
        return 0.0
    return 1.0 - float(resid @ resid) / tss


def bp_test(result: ModelResult, variant="fitted") -> TestResult:
    """Breusch-Pagan heteroscedasticity test, n * R^2 of the auxiliary
    regression of squared residuals on the fitted values (1 dof) or on all
    non-constant regressors (dof = regressor count)."""
    e2 = result.residuals**2
    if variant == "fitted":
        z = result.fitted[:, None]
    elif variant == "regressors":
        keep = [i for i, name in enumerate(result.names) if name != "const"]
        z = result.X[:, keep]
    else:
        raise ValueError(f"unknown BP variant {variant!r}")
    dof = z.shape[1]
    lm = result.n * _aux_r_squared(z, e2)
    return TestResult("breusch-pagan", lm, (dof,), float(stats.chi2.sf(lm, dof)))


def _is_binary(col) -> bool:
    return bool(np.all((col == 0) | (col == 1)))


def reset_test(result: ModelResult, variant="fitted", powers=(2, 3, 4)) -> TestResult:
    """Ramsey RESET for omitted nonlinearity.

    ``variant="fitted"`` (default) adds powers of the fitted values;
    ``variant="regressors"`` adds powers of every non-constant non-binary
    regressor, dropping candidates already collinear with the design.  The
    numerator dof is the number of added terms; the denominator is
    n - rank of the augmented design, so candidate duplicates that only
    emerge among the added terms reduce the residual dof rather than the
    nominal test size.
    """
    X = result.X
    y = result.y
    n = result.n
    if variant == "fitted":
        added = [result.fitted**p for p in powers]
    elif variant == "regressors":
        added = []
        for j, name in enumerate(result.names):
            col = X[:, j]
            if name == "const" or _is_binary(col):
                continue
            for p in powers:
                candidate = col**p
                coef = np.linalg.lstsq(X, candidate, rcond=None)[0]
                resid = candidate - X @ coef
                norm = float(np.sqrt(candidate @ candidate))
                if norm == 0 or np.sqrt(float(resid @ resid)) <= 1e-7 * norm:
                    continue
                added.append(candidate)
    else:
        raise ValueError(f"unknown RESET variant {variant!r}")
    if not added:
        raise ValueError("RESET has no admissible auxiliary terms")
    q = len(added)
    augmented = np.column_stack([X] + added)
    # unit-norm columns: SSR is unchanged and the rank decision stops being
    # dominated by wildly different power-term scales
    norms = np.sqrt((augmented**2).sum(axis=0))
    norms[norms == 0] = 1.0
    scaled = augmented / norms
    coef, _, rank, _ = np.linalg.lstsq(scaled, y, rcond=None)
    resid_u = y - scaled @ coef
    ssr_u = float(resid_u @ resid_u)
    ssr_r = float(result.residuals @ result.residuals)
    df2 = n - int(rank)
    f = ((ssr_r - ssr_u) / q) / (ssr_u / df2)
    return TestResult("ramsey-reset", f, (q, df2), float(stats.f.sf(f, q, df2)))


@dataclass(frozen=True, slots=True)
class DWHResult:
    score_chi2: float
    score_dof: int
    score_p: float
    f_stat: float
    f_dof: tuple
    f_p: float


def dwh_test(X, y, endogenous, instruments, names=None,
             rank_tol=DEFAULT_RANK_TOL) -> DWHResult:
    """Durbin-Wu-Hausman endogeneity test, augmented-regression form.

    The structural equation is refit with the first-stage residuals added;
    the robust regression F tests their coefficient with HC1 covariance and
    (1, n-k-1) dof where k counts the structural parameters.  The robust
    score chi2 is the regression-based heteroscedasticity-robust LM
    statistic for the same restriction.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = np.asarray(instruments, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    names = list(names) if names is not None else [f"x{i}" for i in range(X.shape[1])]
    if isinstance(endogenous, str):
        endog_idx = names.index(endogenous)
    else:
        endog_idx = int(endogenous)
    n, k = X.shape

    exog_idx = [i for i in range(k) if i != endog_idx]
    W = np.column_stack([X[:, exog_idx], Z])
    x_e = X[:, endog_idx]
    pi = np.linalg.lstsq(W, x_e, rcond=None)[0]
    v_hat = x_e - W @ pi

    augmented = np.column_stack([X, v_hat])
    aug_names = names + ["first_stage_residual"]
    aug = ols(augmented, y, se_type="robust-HC1", names=aug_names, rank_tol=rank_tol)
    t_v = float(aug.t_stats[-1])
    f_stat = t_v * t_v
    f_dof = (1, n - k - 1)
    f_p = float(stats.f.sf(f_stat, *f_dof))

    # robust score: partial v_hat out of X, regress 1 on (u_tilde * r_hat)
    restricted = ols(X, y, se_type="classical", names=names, rank_tol=rank_tol)
    u_tilde = restricted.residuals
    gamma = np.linalg.lstsq(X, v_hat, rcond=None)[0]
    r_hat = v_hat - X @ gamma
    g = (u_tilde * r_hat)[:, None]
    ones = np.ones(n)
    coef = np.linalg.lstsq(g, ones, rcond=None)[0]
    ssr = float(((ones - g @ coef) ** 2).sum())
    score = n - ssr
    score_p = float(stats.chi2.sf(score, 1))
    return DWHResult(score, 1, score_p, f_stat, f_dof, f_p)


def correlation_matrix(columns):
    """Pearson pairwise correlations; returns (names, matrix).

    ``columns`` maps names to equal-length vectors.  The diagonal is
    exactly 1; correlations against a zero-variance column are NaN.
    """
    names = list(columns)
    data = [np.asarray(columns[name], dtype=float) for name in names]
    m = len(names)
    out = np.eye(m)
    centered = []
    norms = []
    for vec in data:
        c = vec - vec.mean()
        centered.append(c)
        norms.append(float(np.sqrt(c @ c)))
    for i in range(m):
        for j in range(i + 1, m):
            if norms[i] == 0 or norms[j] == 0:
                out[i, j] = out[j, i] = float("nan")
            else:
                out[i, j] = out[j, i] = float(centered[i] @ centered[j]) / (norms[i] * norms[j])
    return names, out


def turning_point(beta_linear, beta_quad) -> float:
    """Vertex of the fitted quadratic: -beta_linear / (2 * beta_quad)."""
    if beta_quad == 0:
        raise ZeroQuadratic("turning point undefined for a zero quadratic term")
    return -beta_linear / (2.0 * beta_quad) + 0.0


def run_model(cross_section: CrossSection, spec: ModelSpec, rank_tol=DEFAULT_RANK_TOL) -> ModelResult:
    """Dispatch a ModelSpec against an assembled cross-section."""
    X, y, names = design_matrix(cross_section, spec)
    if spec.instruments is not None:
        endog, iv_fields = spec.instruments
        Z = np.column_stack(
            [[float(getattr(o, f)) for o in cross_section.observations] for f in iv_fields]
        )
        return tsls(X, y, endog, Z, se_type=spec.se_type, names=names, rank_tol=rank_tol)
    if spec.weights is not None:
        w = [float(getattr(o, spec.weights)) for o in cross_section.observations]
        return wls(X, y, w, se_type=spec.se_type, names=names, rank_tol=rank_tol)
    return ols(X, y, se_type=spec.se_type, names=names, rank_tol=rank_tol)
