"""Conjugacy classes given by an exact spectrum and Jordan block sizes."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidSpec
from .scalar import ONE, ZERO, scalar

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
FLAVORS = (ADDITIVE, MULTIPLICATIVE)


def check_flavor(flavor):
    if flavor not in FLAVORS:
        raise InvalidSpec(f"unknown flavor {flavor!r}")
    return flavor


@dataclass(frozen=True)
class ConjugacyClassSpec:
    """A class in gl(n) or GL(n).

    ``spectrum`` is a tuple of ``(eigenvalue, blocks)`` pairs where ``blocks``
    is the non-increasing tuple of Jordan block sizes for that eigenvalue.
    """

    n: int
    spectrum: tuple
    flavor: str = ADDITIVE

    def __post_init__(self):
        check_flavor(self.flavor)
        spectrum = []
        for value, blocks in self.spectrum:
            blocks = tuple(int(b) for b in blocks)
            if not blocks or any(b < 1 for b in blocks):
                raise InvalidSpec("block sizes must be positive")
            if list(blocks) != sorted(blocks, reverse=True):
                raise InvalidSpec("block sizes must be non-increasing")
            spectrum.append((scalar(value), blocks))
        object.__setattr__(self, "spectrum", tuple(spectrum))
        values = [v for v, _ in spectrum]
        for i in range(len(values)):
            for j in range(i):
                if values[i] == values[j]:
                    raise InvalidSpec(f"repeated eigenvalue {values[i]}")
        if sum(sum(b) for _, b in spectrum) != self.n:
            raise InvalidSpec("block sizes do not add up to n")
        if self.flavor == MULTIPLICATIVE and any(v.is_zero() for v in values):
            raise InvalidSpec("multiplicative classes need nonzero eigenvalues")

    @classmethod
    def diagonal(cls, values, mults=None, flavor=ADDITIVE):
        """Diagonalizable class; ``mults`` defaults to all ones."""
        values = [scalar(v) for v in values]
        if mults is None:
            mults = [1] * len(values)
        spectrum = tuple((v, (1,) * m) for v, m in zip(values, mults))
        return cls(sum(mults), spectrum, flavor)

    @property
    def eigenvalues(self):
        return tuple(v for v, _ in self.spectrum)

    @property
    def multiplicities(self):
        return tuple(sum(b) for _, b in self.spectrum)

    def block_count(self, value):
        for v, blocks in self.spectrum:
            if v == value:
                return len(blocks)
        return 0

    def is_diagonalizable(self):
        return all(b == 1 for _, blocks in self.spectrum for b in blocks)

    def is_scalar(self):
        return len(self.spectrum) == 1 and self.is_diagonalizable()

    def expanded_eigenvalues(self):
        """Eigenvalues repeated with their algebraic multiplicities."""
        out = []
        for v, blocks in self.spectrum:
            out.extend([v] * sum(blocks))
        return out

    def trace(self):
        total = ZERO
        for v, m in zip(self.eigenvalues, self.multiplicities):
            total = total + v * m
        return total

    def determinant(self):
        total = ONE
        for v, m in zip(self.eigenvalues, self.multiplicities):
            total = total * v ** m
        return total

    def jnf(self):
        from .spectra import Jnf

        return Jnf(tuple((str(v), blocks) for v, blocks in self.spectrum))

    def with_multiplicity(self, value, mult):
        """Diagonalizable copy with the multiplicity of ``value`` changed."""
        if not self.is_diagonalizable():
            raise InvalidSpec("only diagonalizable classes can be resized")
        values, mults = [], []
        for v, m in zip(self.eigenvalues, self.multiplicities):
            if v == value:
                m = mult
            if m > 0:
                values.append(v)
                mults.append(m)
        return ConjugacyClassSpec.diagonal(values, mults, self.flavor)

    def __str__(self):
        parts = []
        for v, blocks in self.spectrum:
            if all(b == 1 for b in blocks):
                parts.append(f"{v}^{len(blocks)}")
            else:
                parts.append(f"{v}:{list(blocks)}")
        return "{" + ", ".join(parts) + "}"
