import numpy as np

from mfc_engine.core.errors import InvalidArgumentError
from mfc_engine.core.rng import RngStream
from mfc_engine.models.base import LqActor, LqCritic
from mfc_engine.models.quadratic_lq import symmetric_units


class Mlp:
    """
    Fully connected network with tanh hidden layers and a linear output layer.

    Weights live in one flat vector; layer l contributes W_l (row-major,
    shape (out, in)) followed by b_l. Inputs are batched as (batch, in).
    """


    def __init__(self, sizes: list[int], params=None, rng: RngStream | None = None):
        if len(sizes) < 2 or any(size < 1 for size in sizes):
            raise InvalidArgumentError(f"invalid layer sizes {sizes}")

        self.sizes = [int(size) for size in sizes]
        self._shapes = list(zip(self.sizes[1:], self.sizes[:-1]))
        self.n_params = sum(out * (inp + 1) for out, inp in self._shapes)

        if params is None:
            params = self.glorot_uniform(self.sizes, rng) if rng is not None else np.zeros(self.n_params)
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_params,):
            raise InvalidArgumentError(f"network {self.sizes} needs {self.n_params} weights, got {params.shape}")
        self.params = params.copy()


    @staticmethod
    def glorot_uniform(sizes: list[int], rng: RngStream) -> np.ndarray:
        """Weights uniform in +-sqrt(6 / (fan_in + fan_out)), zero biases."""

        chunks = []
        for out, inp in zip(sizes[1:], sizes[:-1]):
            bound = np.sqrt(6.0 / (inp + out))
            chunks.append(rng.uniform(-bound, bound, size=out * inp))
            chunks.append(np.zeros(out))
        return np.concatenate(chunks)


    def layers(self, params: np.ndarray | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
        """Views (W, b) into the flat vector."""

        params = self.params if params is None else params
        views = []
        offset = 0
        for out, inp in self._shapes:
            W = params[offset:offset + out * inp].reshape(out, inp)
            offset += out * inp
            b = params[offset:offset + out]
            offset += out
            views.append((W, b))
        return views


    def forward(self, inputs) -> tuple[np.ndarray, list[np.ndarray]]:
        """
        Args:
            inputs: Shape (batch, in).

        Returns:
            tuple: Outputs (batch, out) and the activations needed by ``backward``.
        """

        a = np.atleast_2d(np.asarray(inputs, dtype=float))
        if a.shape[-1] != self.sizes[0]:
            raise InvalidArgumentError(f"input has {a.shape[-1]} features, network expects {self.sizes[0]}")

        activations = [a]
        views = self.layers()
        for W, b in views[:-1]:
            a = np.tanh(a @ W.T + b)
            activations.append(a)
        W, b = views[-1]
        return a @ W.T + b, activations


    def backward(self, activations: list[np.ndarray], grad_output) -> np.ndarray:
        """
        Reverse accumulation of a scalar loss whose gradient in the outputs is
        ``grad_output`` (batch, out); returns the gradient in the flat weights
        summed over the batch.
        """

        return self._backward(activations, np.asarray(grad_output, dtype=float), per_sample=False)


    def jacobian(self, inputs) -> np.ndarray:
        """Per-sample derivative of every output in every weight, shape (batch, out, n_params)."""

        outputs, activations = self.forward(inputs)
        batch, n_out = outputs.shape
        rows = []
        for o in range(n_out):
            seed = np.zeros((batch, n_out))
            seed[:, o] = 1.0
            rows.append(self._backward(activations, seed, per_sample=True))
        return np.stack(rows, axis=1)


    def _backward(self, activations, delta, per_sample: bool) -> np.ndarray:
        views = self.layers()
        grads = []
        for layer in range(len(views) - 1, -1, -1):
            W, _ = views[layer]
            a_prev = activations[layer]
            if per_sample:
                gW = np.einsum("bo,bi->boi", delta, a_prev).reshape(delta.shape[0], -1)
                grads.append(np.concatenate([gW, delta], axis=1))
            else:
                grads.append(np.concatenate([(delta.T @ a_prev).ravel(), delta.sum(axis=0)]))
            if layer > 0:
                delta = (delta @ W) * (1.0 - a_prev ** 2)
        return np.concatenate(grads[::-1], axis=-1)


class MlpCritic(LqCritic):
    """
    Quadratic-shell critic whose K(t) and R(t) are networks of t / T;
    Lam = Y = 0 (centred problems).

    Layout: K-network weights (output d(d+1)/2, upper triangle), then R-network weights.
    """

    kind = "mlp"


    def __init__(
            self,
            state_dim: int = 1,
            hidden: list[int] = (10, 10, 10),
            params=None,
            horizon: float = 1.0,
            rng: RngStream | None = None
        ):
        self.state_dim = int(state_dim)
        self._units = symmetric_units(self.state_dim)
        self.k_net = Mlp([1, *hidden, self._units.shape[0]], rng=rng)
        self.r_net = Mlp([1, *hidden, 1], rng=rng)
        n_params = self.k_net.n_params + self.r_net.n_params
        if params is None:
            params = np.concatenate([self.k_net.params, self.r_net.params])
        super().__init__(params, horizon, n_params=n_params)


    def _sync(self) -> None:
        split = self.k_net.n_params
        self.k_net.params = self.params[:split]
        self.r_net.params = self.params[split:]


    def _inputs(self, t) -> tuple[np.ndarray, tuple]:
        t = np.asarray(t, dtype=float)
        return (t / self.horizon).reshape(-1, 1), t.shape


    def terms(self, t, lam: float = 0.0):
        self._sync()
        inputs, shape = self._inputs(t)
        d = self.state_dim
        k_out, _ = self.k_net.forward(inputs)
        r_out, _ = self.r_net.forward(inputs)

        K = np.einsum("bp,pij->bij", k_out, self._units).reshape(shape + (d, d))
        zeros = np.zeros(shape + (d,))
        return K, np.zeros(shape + (d, d)), zeros, r_out[:, 0].reshape(shape)


    def term_grads(self, t, lam: float = 0.0):
        self._sync()
        inputs, shape = self._inputs(t)
        d, split = self.state_dim, self.k_net.n_params
        batch = inputs.shape[0]

        dK = np.zeros((batch, self.n_params, d, d))
        dK[:, :split] = np.einsum("bpw,pij->bwij", self.k_net.jacobian(inputs), self._units)
        dR = np.zeros((batch, self.n_params))
        dR[:, split:] = self.r_net.jacobian(inputs)[:, 0, :]

        return (
            dK.reshape(shape + (self.n_params, d, d)),
            np.zeros(shape + (self.n_params, d, d)),
            np.zeros(shape + (self.n_params, d)),
            dR.reshape(shape + (self.n_params,)),
        )


class MlpActor(LqActor):
    """
    Centred actor whose feedback matrix phi(t) (m x d) is a network of t / T:
    mean phi(t)(x - mu_bar) + phi3, with phi3 an optional constant vector.

    Layout: network weights, then phi3 (m entries) when ``with_offset``.
    """

    kind = "mlp"


    def __init__(
            self,
            state_dim: int = 1,
            action_dim: int = 1,
            hidden: list[int] = (10, 10, 10),
            params=None,
            horizon: float = 1.0,
            variance_scale: float = 1.0,
            with_offset: bool = False,
            rng: RngStream | None = None
        ):
        self.state_dim = int(state_dim)
        self.with_offset = bool(with_offset)
        self.variance_scale = float(variance_scale)
        self.net = Mlp([1, *hidden, action_dim * self.state_dim], rng=rng)
        n_offset = action_dim if self.with_offset else 0
        if params is None:
            params = np.concatenate([self.net.params, np.zeros(n_offset)])
        super().__init__(params, horizon, action_dim, n_params=self.net.n_params + n_offset)


    def _inputs(self, t) -> tuple[np.ndarray, tuple]:
        t = np.asarray(t, dtype=float)
        return (t / self.horizon).reshape(-1, 1), t.shape


    def _offset(self) -> np.ndarray:
        if self.with_offset:
            return self.params[self.net.n_params:]
        return np.zeros(self.action_dim)


    def policy_terms(self, t):
        self.net.params = self.params[:self.net.n_params]
        inputs, shape = self._inputs(t)
        m, d = self.action_dim, self.state_dim
        phi = self.net.forward(inputs)[0].reshape(shape + (m, d))
        return phi, -phi, np.broadcast_to(self._offset(), shape + (m,)).copy()


    def policy_term_grads(self, t):
        self.net.params = self.params[:self.net.n_params]
        inputs, shape = self._inputs(t)
        m, d, split = self.action_dim, self.state_dim, self.net.n_params
        batch = inputs.shape[0]

        dphi = np.zeros((batch, self.n_params, m * d))
        dphi[:, :split] = np.swapaxes(self.net.jacobian(inputs), 1, 2)
        dphi3 = np.zeros((batch, self.n_params, m))
        if self.with_offset:
            dphi3[:, split:] = np.eye(m)

        dphi = dphi.reshape(shape + (self.n_params, m, d))
        return dphi, -dphi, dphi3.reshape(shape + (self.n_params, m))
