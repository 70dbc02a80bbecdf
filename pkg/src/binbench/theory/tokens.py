"""Exchangeable token sequences that drive the queue bounds.

Each generator returns a 2-D ``int64`` array, one draw per row; every row
sums to zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class TokenKind(str, enum.Enum):
    SIGN_PERMUTATION = "sign-permutation"
    MULTINOMIAL = "multinomial"
    HYPERGEOMETRIC = "hypergeometric"


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[int, ...]
    kind: TokenKind
    #: ``N`` for sign permutations, ``T`` for multinomial, ``tau`` for hypergeometric.
    size: int
    #: Balls per colour for hypergeometric increments; 1 otherwise.
    block: int = 1

    def __len__(self) -> int:
        return len(self.tokens)


def sign_permutations(N: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Rows of ``N`` ``+1`` and ``N`` ``-1`` in uniformly random order."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    base = np.concatenate([np.ones(N, dtype=np.int64), -np.ones(N, dtype=np.int64)])
    return rng.permuted(np.tile(base, (trials, 1)), axis=1)


def multinomial_increments(T: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """``psi_t - 1`` with ``(psi_1..psi_T) ~ Multinomial(T, (1/T, ..., 1/T))``."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    return rng.multinomial(T, np.full(T, 1.0 / T), size=trials).astype(np.int64) - 1


def hypergeometric_increments(tau: int, block: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """``eta_i - 1``: counts of ``tau`` draws without replacement from ``tau`` colours of ``block`` balls."""
    if tau < 1 or block < 1:
        raise ValueError(f"need tau >= 1 and block >= 1, got tau={tau}, block={block}")
    colors = np.full(tau, block, dtype=np.int64)
    return rng.multivariate_hypergeometric(colors, tau, size=trials).astype(np.int64) - 1


def draw(kind: TokenKind | str, size: int, rng: np.random.Generator, block: int = 2) -> TokenSequence:
    kind = TokenKind(kind)
    if kind is TokenKind.SIGN_PERMUTATION:
        row = sign_permutations(size, 1, rng)[0]
        block = 1
    elif kind is TokenKind.MULTINOMIAL:
        row = multinomial_increments(size, 1, rng)[0]
        block = 1
    else:
        row = hypergeometric_increments(size, block, 1, rng)[0]
    return TokenSequence(tuple(int(v) for v in row), kind, size, block)


def rademacher_weights(shape: tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    return rng.choice(np.array([-1, 1], dtype=np.int64), size=shape)
