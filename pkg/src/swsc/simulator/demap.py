"""Per-layer bit LLRs for a superposition of layered symbol maps in Gaussian noise.

The received symbol is ``y = g_x x(x_1..x_K) + g_w w(w_1..w_L) + noise``.
Known layers are substituted exactly; every other layer is marginalized over
its signal set with a uniform prior. The noise has variance 1 for real
signals and 1/2 per dimension for complex ones, so ``log p(y|mu) =
-|y - mu|^2 / noise_var_per_dim / 2`` up to a constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np
from scipy.special import logsumexp

from ..channels import SymbolMap
from .code import LLR_CLAMP


@dataclass(frozen=True, eq=False)
class SuperpositionModel:
    """Received-signal model at one receiver.

    Layer positions count the layers of ``map_x`` first, then those of ``map_w``.
    """

    map_x: SymbolMap
    map_w: SymbolMap
    gains: tuple
    noise_var: float = 1.0

    @cached_property
    def complex(self) -> bool:
        return np.iscomplexobj(self.map_x.table) or np.iscomplexobj(self.map_w.table)

    @cached_property
    def layer_sizes(self) -> tuple:
        return self.map_x.layer_alphabets + self.map_w.layer_alphabets

    @cached_property
    def combos(self) -> np.ndarray:
        """``(C, n_layers)`` layer-index tuples of every joint symbol."""
        return np.array(list(product(*[range(s) for s in self.layer_sizes])), dtype=np.int64)

    @cached_property
    def means(self) -> np.ndarray:
        kx = self.map_x.n_layers
        c = self.combos
        x = self.map_x.table[tuple(c[:, :kx].T)]
        w = self.map_w.table[tuple(c[:, kx:].T)]
        return self.gains[0] * x + self.gains[1] * w

    @property
    def var_per_dim(self) -> float:
        return self.noise_var / 2.0 if self.complex else self.noise_var

    def layer_constellation(self, layer: int):
        kx = self.map_x.n_layers
        return self.map_x.layers[layer] if layer < kx else self.map_w.layers[layer - kx]

    def transmit(self, x_idx: np.ndarray, w_idx: np.ndarray) -> np.ndarray:
        """Noise-free received block from per-layer index arrays ``(K, n)`` and ``(L, n)``."""
        x = self.map_x.table[tuple(x_idx)]
        w = self.map_w.table[tuple(w_idx)]
        return self.gains[0] * x + self.gains[1] * w

    def log_likelihoods(self, y: np.ndarray) -> np.ndarray:
        """``(n, C)`` unnormalized log p(y | joint symbol)."""
        d = np.abs(y[:, None] - self.means[None, :]) ** 2
        return -d / (2.0 * self.var_per_dim)

    def llr(self, y: np.ndarray, target: int, known: dict | None = None, loglik: np.ndarray | None = None,
            clamp: float = LLR_CLAMP) -> np.ndarray:
        """``(n, bits)`` LLRs ``log P(bit=0|y)/P(bit=1|y)`` of layer ``target``.

        ``known`` maps layer positions to index arrays of length n.
        """
        ll = self.log_likelihoods(y) if loglik is None else loglik.copy()
        for layer, idx in (known or {}).items():
            if layer == target:
                raise ValueError("target layer cannot be known")
            ll[self.combos[None, :, layer] != np.asarray(idx)[:, None]] = -np.inf
        const = self.layer_constellation(target)
        bits = const.bit_matrix()[self.combos[:, target]]
        out = np.empty((y.shape[0], const.bits))
        for q in range(const.bits):
            zero = bits[:, q] == 0
            out[:, q] = logsumexp(ll[:, zero], axis=1) - logsumexp(ll[:, ~zero], axis=1)
        return np.clip(np.nan_to_num(out, nan=0.0), -clamp, clamp)


def gaussian_equivalent(model: SuperpositionModel, drop_sender: int) -> SuperpositionModel:
    """Replace one sender by Gaussian noise of the same received power."""
    maps = [model.map_x, model.map_w]
    power = abs(model.gains[drop_sender]) ** 2 * maps[drop_sender].average_power()
    gains = list(model.gains)
    gains[drop_sender] = 0.0
    return SuperpositionModel(model.map_x, model.map_w, tuple(gains), model.noise_var + power)
