import logging
from dataclasses import dataclass, field, fields

import numpy as np

from mfc_engine.core.errors import AssumptionViolationError, InvalidArgumentError

logger = logging.getLogger(__name__)

_TOL = 1e-12

# name -> shape key; "dd" is d x d, "dm" is d x m, "md" is m x d, "mm" is m x m
_SHAPES = {
    "B": "dd", "B_bar": "dd", "C": "dm", "D": "dd", "D_bar": "dd", "F": "dm",
    "gamma": "d", "Q": "dd", "Q_bar": "dd", "N": "mm", "I": "md", "I_bar": "md",
    "M": "d", "L": "d", "H": "m", "P": "dd", "P_bar": "dd",
}
_SYMMETRIC = ("Q", "Q_bar", "N", "P", "P_bar")


def _min_eig(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (matrix + matrix.T)).min())


@dataclass(frozen=True, eq=False)
class LqCoefficients:
    """
    Coefficients of the linear-quadratic mean-field model

        drift      B x + B_bar mu_bar + C a
        diffusion  gamma + D x + D_bar mu_bar + F a           (one Brownian motion)
        running    x'Qx + mu_bar'Q_bar mu_bar + a'Na + 2a'Ix + 2a'I_bar mu_bar + 2M.x + 2H.a
        terminal   x'Px + mu_bar'P_bar mu_bar + 2L.x

    with discount rate beta. Construction checks shapes, symmetry and, unless
    ``validate`` is False, the structural assumptions (H1)/(H2) of the
    Riccati benchmark.
    """

    B: np.ndarray
    B_bar: np.ndarray
    C: np.ndarray
    D: np.ndarray
    D_bar: np.ndarray
    F: np.ndarray
    gamma: np.ndarray
    Q: np.ndarray
    Q_bar: np.ndarray
    N: np.ndarray
    I: np.ndarray
    I_bar: np.ndarray
    M: np.ndarray
    L: np.ndarray
    H: np.ndarray
    P: np.ndarray
    P_bar: np.ndarray
    beta: float = 0.0
    validate: bool = field(default=True, compare=False, repr=False)


    def __post_init__(self):
        for name in _SHAPES:
            array = np.array(getattr(self, name), dtype=float)
            array.setflags(write=False)
            object.__setattr__(self, name, array)

        d = self.B.shape[0] if self.B.ndim == 2 else -1
        m = self.N.shape[0] if self.N.ndim == 2 else -1
        dims = {"d": d, "m": m}
        for name, key in _SHAPES.items():
            expected = tuple(dims[c] for c in key)
            if getattr(self, name).shape != expected:
                raise InvalidArgumentError(
                    f"{name} has shape {getattr(self, name).shape}, expected {expected} (d={d}, m={m})"
                )
        for name in _SYMMETRIC:
            matrix = getattr(self, name)
            if not np.allclose(matrix, matrix.T, atol=_TOL, rtol=0.0):
                raise InvalidArgumentError(f"{name} must be symmetric")
        if not np.isfinite(self.beta) or self.beta < 0.0:
            raise InvalidArgumentError(f"discount beta must be nonnegative, got {self.beta}")

        if self.validate:
            self.check_assumptions()


    @property
    def d(self) -> int:
        return self.B.shape[0]


    @property
    def m(self) -> int:
        return self.N.shape[0]


    @property
    def B_hat(self) -> np.ndarray:
        return self.B + self.B_bar


    @property
    def D_hat(self) -> np.ndarray:
        return self.D + self.D_bar


    @property
    def Q_hat(self) -> np.ndarray:
        return self.Q + self.Q_bar


    @property
    def P_hat(self) -> np.ndarray:
        return self.P + self.P_bar


    @property
    def I_hat(self) -> np.ndarray:
        return self.I + self.I_bar


    def check_assumptions(self) -> tuple[str, str]:
        """
        Check (H1) and (H2), accepting either the uniformly convex branch or the
        scalar degenerate branch of each.

        Returns:
            tuple[str, str]: The branch that holds for each condition, e.g. ("H1(i)", "H2(i)").

        Raises:
            AssumptionViolationError: Naming every failed requirement.
        """

        scalar = self.d == 1 and self.m == 1
        f_nonzero = bool(np.any(self.F != 0.0))
        n_pd = _min_eig(self.N) > _TOL

        h1_failures = []
        if not n_pd:
            h1_failures.append("N is not positive definite")
        if _min_eig(self.P) < -_TOL:
            h1_failures.append("P is not positive semidefinite")
        if n_pd and _min_eig(self.Q - self.I.T @ np.linalg.solve(self.N, self.I)) < -_TOL:
            h1_failures.append("Q - I'N^-1 I is not positive semidefinite")
        h1_degenerate = (
            scalar and f_nonzero and np.all(self.I == 0.0)
            and self.Q[0, 0] >= 0.0 and self.P[0, 0] > 0.0
        )

        h2_failures = []
        if not n_pd:
            h2_failures.append("N is not positive definite")
        if _min_eig(self.P_hat) < -_TOL:
            h2_failures.append("P + P_bar is not positive semidefinite")
        if n_pd and _min_eig(self.Q_hat - self.I_hat.T @ np.linalg.solve(self.N, self.I_hat)) < -_TOL:
            h2_failures.append("(Q + Q_bar) - (I + I_bar)'N^-1 (I + I_bar) is not positive semidefinite")
        h2_degenerate = (
            scalar and f_nonzero and np.all(self.I_hat == 0.0)
            and self.Q_hat[0, 0] >= 0.0 and self.P_hat[0, 0] >= 0.0 and self.P[0, 0] > 0.0
        )

        if h1_failures and not h1_degenerate:
            raise AssumptionViolationError("(H1) violated: " + "; ".join(h1_failures))
        if h2_failures and not h2_degenerate:
            raise AssumptionViolationError("(H2) violated: " + "; ".join(h2_failures))

        branches = ("H1(i)" if not h1_failures else "H1(ii)", "H2(i)" if not h2_failures else "H2(ii)")
        logger.debug("LQ assumptions hold: %s, %s", *branches)
        return branches


    def replace(self, **changes) -> "LqCoefficients":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return LqCoefficients(**values)


    @classmethod
    def zeros(cls, d: int, m: int, **overrides) -> "LqCoefficients":
        """
        Coefficients with every block zero except those given in ``overrides``.

        Scalars are accepted for blocks of a d = m = 1 model.
        """

        sizes = {"d": d, "m": m}
        values = {}
        for name, key in _SHAPES.items():
            shape = tuple(sizes[c] for c in key)
            if name in overrides:
                values[name] = np.reshape(np.asarray(overrides.pop(name), dtype=float), shape)
            else:
                values[name] = np.zeros(shape)
        return cls(**values, **overrides)


    @classmethod
    def systemic_risk(
            cls,
            b_bar: float = 0.6,
            i: float = 0.4,
            q: float = 1.0,
            p: float = 1.0,
            gamma: float = 1.0,
            n: float = 0.5,
            **overrides
        ) -> "LqCoefficients":
        """Systemic-risk interbank model written on the centred coordinate x - mu_bar."""

        return cls.zeros(
            1, 1,
            B=-b_bar, B_bar=b_bar, C=1.0, gamma=gamma,
            Q=q, Q_bar=-q, N=n, I=i, I_bar=-i, P=p, P_bar=-p,
            **overrides
        )


    @classmethod
    def trading(
            cls,
            p: float = 3.0,
            h: float = 2.0,
            gamma: float = 1.0,
            n: float = 1.0,
            **overrides
        ) -> "LqCoefficients":
        """Optimal-trading model: penalty on the terminal variance of the inventory."""

        return cls.zeros(1, 1, C=1.0, gamma=gamma, N=n, H=h, P=p, P_bar=-p, **overrides)


    @staticmethod
    def from_config(cfg, d: int, m: int, validate: bool = True) -> "LqCoefficients":
        """
        Build coefficients from a configuration block whose field names mirror
        this class; omitted blocks are zero.

        Args:
            cfg: Pydantic model or dict.
            d (int): State dimension.
            m (int): Action dimension.
            validate (bool): Whether to check (H1)/(H2).

        Returns:
            LqCoefficients: Validated coefficients.
        """

        raw = cfg if isinstance(cfg, dict) else cfg.model_dump()
        overrides = {k: v for k, v in raw.items() if v is not None and k in _SHAPES}
        beta = raw.get("beta") or 0.0
        return LqCoefficients.zeros(d, m, beta=beta, validate=validate, **overrides)
