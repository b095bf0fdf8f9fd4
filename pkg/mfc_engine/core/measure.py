import numpy as np

from mfc_engine.core.errors import InvalidArgumentError, NumericError


MERGE_WEIGHT = 1e-9
DEFAULT_MAX_ATOMS = 4096


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class EmpiricalMeasure:
    """
    Weighted-atom estimate of a population law on R^d.

    Instances are values: ``update`` and ``update_many`` return new measures and
    never touch the receiver, so a measure can be shared between threads.

    Atoms whose weight drops below ``MERGE_WEIGHT`` (and the oldest atoms once
    more than ``max_atoms`` are held) are folded into a single residual atom
    placed at their weighted mean, which leaves the mean untouched. The cached
    second moment follows the uncompacted mixture.

    Attributes:
        points (np.ndarray): Atom locations, shape (n_atoms, d).
        weights (np.ndarray): Atom weights, shape (n_atoms,), summing to one.
        mean (np.ndarray): Cached mean, shape (d,).
        second_moment (float): Cached E|X|^2 of the mixture.
    """


    def __init__(
            self,
            points: np.ndarray,
            weights: np.ndarray,
            mean: np.ndarray | None = None,
            second_moment: float | None = None,
            has_residual: bool = False,
            max_atoms: int = DEFAULT_MAX_ATOMS
        ):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        weights = np.atleast_1d(np.asarray(weights, dtype=float))

        if points.shape[0] != weights.shape[0]:
            raise InvalidArgumentError(
                f"{points.shape[0]} atoms but {weights.shape[0]} weights"
            )
        if np.any(weights < 0.0):
            raise InvalidArgumentError("atom weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError(f"atom weights sum to {weights.sum()!r}, expected 1")
        if max_atoms < 2:
            raise InvalidArgumentError("max_atoms must be at least 2")

        self.points = _frozen(points)
        self.weights = _frozen(weights)
        self.mean = _frozen(
            weights @ points if mean is None else np.asarray(mean, dtype=float).copy()
        )
        self.second_moment = float(
            weights @ np.einsum("ij,ij->i", points, points) if second_moment is None else second_moment
        )
        self.max_atoms = int(max_atoms)
        self._has_residual = has_residual


    @classmethod
    def dirac(cls, point, max_atoms: int = DEFAULT_MAX_ATOMS) -> "EmpiricalMeasure":
        """Point mass at ``point``."""

        point = np.atleast_1d(np.asarray(point, dtype=float))
        return cls(point[None, :], np.ones(1), max_atoms=max_atoms)


    @property
    def dim(self) -> int:
        return self.points.shape[1]


    @property
    def variance(self) -> float:
        """Trace of the covariance, E|X|^2 - |E X|^2."""

        return self.second_moment - float(self.mean @ self.mean)


    def __len__(self) -> int:
        return self.points.shape[0]


    def __repr__(self) -> str:
        return f"EmpiricalMeasure(dim={self.dim}, atoms={len(self)}, mean={self.mean.tolist()})"


    def _check_point(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape[-1] != self.dim:
            raise InvalidArgumentError(f"point has dimension {x.shape[-1]}, measure has {self.dim}")
        if not np.all(np.isfinite(x)):
            raise NumericError("non-finite point passed to the measure update")
        return x


    @staticmethod
    def _check_rate(rho: float) -> float:
        if not 0.0 < rho <= 1.0:
            raise InvalidArgumentError(f"rho_S must lie in (0, 1], got {rho}")
        return float(rho)


    def update(self, x, rho: float) -> "EmpiricalMeasure":
        """
        Return (1 - rho) * self + rho * delta_x.

        Args:
            x: New observation, shape (d,).
            rho (float): Mixing weight in (0, 1].

        Returns:
            EmpiricalMeasure: The updated measure.

        Raises:
            InvalidArgumentError: On a dimension mismatch or rho outside (0, 1].
        """

        x = self._check_point(x)
        rho = self._check_rate(rho)
        if x.ndim != 1:
            raise InvalidArgumentError("update takes a single point; use update_many for batches")

        if rho == 1.0:
            return EmpiricalMeasure.dirac(x, max_atoms=self.max_atoms)

        points = np.vstack([self.points, x[None, :]])
        weights = np.append((1.0 - rho) * self.weights, rho)
        mean = (1.0 - rho) * self.mean + rho * x
        second_moment = (1.0 - rho) * self.second_moment + rho * float(x @ x)
        return self._compacted(points, weights, mean, second_moment)


    def update_many(self, xs, rho: float) -> "EmpiricalMeasure":
        """
        Fold the rows of ``xs`` in order, as repeated calls to ``update`` would.

        The closed form avoids one allocation per row: after B folds the old
        weights carry (1 - rho)^B and row b carries rho * (1 - rho)^(B - 1 - b).
        """

        xs = self._check_point(xs)
        xs = np.atleast_2d(xs)
        rho = self._check_rate(rho)
        n_new = xs.shape[0]

        if rho == 1.0:
            return EmpiricalMeasure.dirac(xs[-1], max_atoms=self.max_atoms)

        keep = 1.0 - rho
        new_weights = rho * keep ** np.arange(n_new - 1, -1, -1, dtype=float)
        decay = keep ** n_new

        points = np.vstack([self.points, xs])
        weights = np.concatenate([decay * self.weights, new_weights])
        mean = decay * self.mean + new_weights @ xs
        second_moment = decay * self.second_moment + float(new_weights @ np.einsum("ij,ij->i", xs, xs))
        return self._compacted(points, weights, mean, second_moment)


    def preview_mean(self, xs, rho: float) -> np.ndarray:
        """
        Means of (1 - rho) * self + rho * delta_x for each row x of ``xs``.

        Used by minibatch agents that each update their own frozen copy.
        """

        xs = self._check_point(xs)
        rho = self._check_rate(rho)
        return (1.0 - rho) * self.mean + rho * xs


    def _compacted(self, points, weights, mean, second_moment) -> "EmpiricalMeasure":
        merge = weights < MERGE_WEIGHT
        if self._has_residual:
            merge[0] = True

        overflow = int((~merge).sum()) + 1 - self.max_atoms
        if overflow > 0:
            merge[np.flatnonzero(~merge)[:overflow]] = True

        if not merge.any() or (merge.sum() == 1 and merge[0]):
            return self._from_parts(points, weights, mean, second_moment, bool(merge.any()))

        merged_weight = weights[merge].sum()
        if merged_weight > 0.0:
            merged_point = (weights[merge] @ points[merge]) / merged_weight
        else:
            merged_point = points[merge][-1]

        points = np.vstack([merged_point[None, :], points[~merge]])
        weights = np.concatenate([[merged_weight], weights[~merge]])
        return self._from_parts(points, weights, mean, second_moment, True)


    def _from_parts(self, points, weights, mean, second_moment, has_residual) -> "EmpiricalMeasure":
        # internal path: inputs already satisfy the invariants
        measure = object.__new__(EmpiricalMeasure)
        measure.points = _frozen(points)
        measure.weights = _frozen(weights)
        measure.mean = _frozen(np.asarray(mean, dtype=float))
        measure.second_moment = float(second_moment)
        measure.max_atoms = self.max_atoms
        measure._has_residual = has_residual
        return measure


def measure_mean(mu: EmpiricalMeasure) -> np.ndarray:
    """Sum of w_i * x_i, read from the cache."""

    return mu.mean


def update_measure(mu: EmpiricalMeasure, x, rho_s: float) -> EmpiricalMeasure:
    return mu.update(x, rho_s)
