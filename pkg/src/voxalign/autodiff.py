"""Minimal reverse-mode automatic differentiation over numpy arrays.

A Tensor wraps an ndarray and remembers how to push a gradient back into
its parents. Graphs are built eagerly by the ops below and released after
``backward``. Conventions:

- ops follow numpy broadcasting; gradients of broadcast operands are
  summed back to the operand's shape,
- ``matmul`` requires both operands to have ndim >= 2,
- ``backward`` is called on a scalar (size-1) tensor,
- leaf tensors created with ``requires_grad=True`` accumulate into
  ``.grad``; intermediate nodes are internal.

Inside a ``no_grad()`` block ops compute values only, which makes eval
forwards cheap. ``use_count`` on leaves counts how often a tensor entered
any op; it backs read-access assertions in tests and never affects math.
"""

from __future__ import annotations

import contextlib

import numpy as np
from scipy.special import erf as _np_erf

_GRAD_ENABLED = True


@contextlib.contextmanager
def no_grad():
    """Disable graph construction within the block."""
    global _GRAD_ENABLED
    prev = _GRAD_ENABLED
    _GRAD_ENABLED = False
    try:
        yield
    finally:
        _GRAD_ENABLED = prev


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum `grad` down to `shape`, undoing numpy broadcasting."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "name", "use_count", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        self.data = np.asarray(data)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self.name = name
        self.use_count = 0
        self._parents: tuple = ()
        self._backward = None

    # -- introspection -------------------------------------------------
    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data)

    def __repr__(self):
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype}{tag})"

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    # -- graph plumbing ------------------------------------------------
    def _in_graph(self) -> bool:
        return self.requires_grad or self._backward is not None

    def _accum(self, grad: np.ndarray) -> None:
        if self.grad is None:
            self.grad = grad.copy() if isinstance(grad, np.ndarray) else np.asarray(grad)
        else:
            self.grad = self.grad + grad

    def backward(self, seed: np.ndarray | None = None) -> None:
        if seed is None:
            if self.data.size != 1:
                raise ValueError("backward() without a seed needs a scalar tensor")
            seed = np.ones_like(self.data)
        # iterative topological sort; recursion depth is unbounded otherwise
        topo: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in visited and (p._backward is not None or p.requires_grad):
                    stack.append((p, False))
        self._accum(np.asarray(seed))
        for node in reversed(topo):
            if node._backward is not None:
                node._backward(node.grad)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _as_tensor(other, like=self)
        out = _make(self.data + other.data, (self, other))
        if out._parents:
            def bwd(g):
                _send(self, _unbroadcast(g, self.data.shape))
                _send(other, _unbroadcast(g, other.data.shape))
            out._backward = bwd
        return out

    __radd__ = __add__

    def __neg__(self):
        out = _make(-self.data, (self,))
        if out._parents:
            out._backward = lambda g: _send(self, -g)
        return out

    def __sub__(self, other):
        return self + (-_as_tensor(other, like=self))

    def __rsub__(self, other):
        return _as_tensor(other, like=self) + (-self)

    def __mul__(self, other):
        other = _as_tensor(other, like=self)
        out = _make(self.data * other.data, (self, other))
        if out._parents:
            def bwd(g):
                _send(self, _unbroadcast(g * other.data, self.data.shape))
                _send(other, _unbroadcast(g * self.data, other.data.shape))
            out._backward = bwd
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_tensor(other, like=self)
        out = _make(self.data / other.data, (self, other))
        if out._parents:
            def bwd(g):
                _send(self, _unbroadcast(g / other.data, self.data.shape))
                _send(other, _unbroadcast(-g * self.data / (other.data * other.data), other.data.shape))
            out._backward = bwd
        return out

    def __rtruediv__(self, other):
        return _as_tensor(other, like=self) / self

    def __pow__(self, n):
        if not isinstance(n, (int, float)):
            raise TypeError("only scalar exponents are supported")
        out = _make(self.data ** n, (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g * n * self.data ** (n - 1))
        return out

    def __matmul__(self, other):
        other = _as_tensor(other, like=self)
        if self.data.ndim < 2 or other.data.ndim < 2:
            raise ValueError("matmul operands must have ndim >= 2")
        out = _make(np.matmul(self.data, other.data), (self, other))
        if out._parents:
            def bwd(g):
                _send(self, _unbroadcast(np.matmul(g, other.data.swapaxes(-1, -2)), self.data.shape))
                _send(other, _unbroadcast(np.matmul(self.data.swapaxes(-1, -2), g), other.data.shape))
            out._backward = bwd
        return out

    # -- elementwise functions ------------------------------------------
    def exp(self):
        val = np.exp(self.data)
        out = _make(val, (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g * val)
        return out

    def log(self):
        out = _make(np.log(self.data), (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g / self.data)
        return out

    def sqrt(self):
        val = np.sqrt(self.data)
        out = _make(val, (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g * 0.5 / val)
        return out

    def abs(self):
        out = _make(np.abs(self.data), (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g * np.sign(self.data))
        return out

    def erf(self):
        out = _make(_np_erf(self.data), (self,))
        if out._parents:
            coeff = 2.0 / np.sqrt(np.pi)
            out._backward = lambda g: _send(self, g * coeff * np.exp(-self.data * self.data))
        return out

    def sigmoid(self):
        x = self.data
        val = np.empty_like(x)
        pos = x >= 0
        val[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        val[~pos] = ex / (1.0 + ex)
        out = _make(val, (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g * val * (1.0 - val))
        return out

    def tanh(self):
        val = np.tanh(self.data)
        out = _make(val, (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g * (1.0 - val * val))
        return out

    # -- reductions ------------------------------------------------------
    def sum(self, axis=None, keepdims: bool = False):
        out = _make(self.data.sum(axis=axis, keepdims=keepdims), (self,))
        if out._parents:
            def bwd(g):
                g = np.asarray(g)
                if axis is not None and not keepdims:
                    g = np.expand_dims(g, axis)
                _send(self, np.broadcast_to(g, self.data.shape))
            out._backward = bwd
        return out

    def mean(self, axis=None, keepdims: bool = False):
        count = self.data.size if axis is None else np.prod(
            [self.data.shape[a] for a in (axis if isinstance(axis, tuple) else (axis,))]
        )
        out = _make(self.data.mean(axis=axis, keepdims=keepdims), (self,))
        if out._parents:
            def bwd(g):
                g = np.asarray(g)
                if axis is not None and not keepdims:
                    g = np.expand_dims(g, axis)
                _send(self, np.broadcast_to(g, self.data.shape) / count)
            out._backward = bwd
        return out

    def softmax(self, axis: int = -1):
        """Numerically-stable softmax along `axis`."""
        shifted = self.data - self.data.max(axis=axis, keepdims=True)
        ex = np.exp(shifted)
        val = ex / ex.sum(axis=axis, keepdims=True)
        out = _make(val, (self,))
        if out._parents:
            def bwd(g):
                dot = (g * val).sum(axis=axis, keepdims=True)
                _send(self, val * (g - dot))
            out._backward = bwd
        return out

    # -- shape ops -------------------------------------------------------
    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        out = _make(self.data.reshape(shape), (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g.reshape(self.data.shape))
        return out

    def swapaxes(self, a: int, b: int):
        out = _make(self.data.swapaxes(a, b), (self,))
        if out._parents:
            out._backward = lambda g: _send(self, g.swapaxes(a, b))
        return out

    def __getitem__(self, key):
        """Basic indexing only (ints, slices, ellipsis); no fancy indexing."""
        out = _make(self.data[key], (self,))
        if out._parents:
            def bwd(g):
                full = np.zeros_like(self.data)
                full[key] = g
                _send(self, full)
            out._backward = bwd
        return out


def _as_tensor(x, like: Tensor | None = None) -> Tensor:
    if isinstance(x, Tensor):
        return x
    dtype = like.data.dtype if like is not None else None
    return Tensor(np.asarray(x, dtype=dtype))


def _make(data: np.ndarray, parents: tuple) -> Tensor:
    for p in parents:
        p.use_count += 1
    out = Tensor(data)
    if _GRAD_ENABLED and any(p._in_graph() for p in parents):
        out._parents = parents
    return out


def _send(t: Tensor, grad: np.ndarray) -> None:
    if t._in_graph():
        t._accum(grad)


# -- composite helpers ----------------------------------------------------

def rows(weight: Tensor, indices: np.ndarray) -> Tensor:
    """Gather rows of a 2-D tensor by integer indices (embedding lookup)."""
    idx = np.asarray(indices)
    out = _make(weight.data[idx], (weight,))
    if out._parents:
        def bwd(g):
            full = np.zeros_like(weight.data)
            np.add.at(full, idx, g)
            _send(weight, full)
        out._backward = bwd
    return out


def gelu(x: Tensor) -> Tensor:
    """Exact (erf-based) GELU; smooth everywhere, which keeps finite
    difference checks clean."""
    return x * ((x * (1.0 / np.sqrt(2.0))).erf() + 1.0) * 0.5


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    mu = x.mean(axis=-1, keepdims=True)
    centered = x - mu
    var = (centered * centered).mean(axis=-1, keepdims=True)
    return centered / (var + eps).sqrt() * gain + bias


def logsumexp(x: Tensor, axis: int = -1) -> Tensor:
    """Stable log-sum-exp; the max shift is a constant w.r.t. gradients."""
    shift = Tensor(x.data.max(axis=axis, keepdims=True))
    out = (x - shift).exp().sum(axis=axis, keepdims=True).log() + shift
    return out


def dropout(x: Tensor, p: float, rng: np.random.Generator) -> Tensor:
    """Inverted dropout: kept coordinates are scaled by 1/(1-p)."""
    if p <= 0.0:
        return x
    keep = (rng.random(x.shape) >= p).astype(x.data.dtype) / (1.0 - p)
    return x * Tensor(keep)
