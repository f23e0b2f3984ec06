"""Dense complex Clifford algebra with generators squaring to -1.

Blades are addressed by integer bitmasks: bit ``j-1`` set means generator
``e_j`` is present, so ``0b011`` is ``e1 e2`` and ``0`` is the scalar blade.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_DIM = 8


class DimensionError(ValueError):
    pass


def _check_dim(n: int) -> None:
    if not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension must be in [1, {MAX_DIM}], got {n}")


def grade_of(mask: int) -> int:
    return bin(mask).count("1")


def _reorder_sign(a: int, b: int) -> int:
    # transpositions needed to move every generator of b past the higher ones of a
    swaps = 0
    a >>= 1
    while a:
        swaps += grade_of(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(a: int, b: int, n: int | None = None) -> tuple[int, int]:
    """Product of two basis blades as ``(sign, mask)``.

    ``n`` is optional; when given both masks must fit in ``n`` generators.
    """
    if n is not None:
        _check_dim(n)
        if a >= 1 << n or b >= 1 << n or a < 0 or b < 0:
            raise DimensionError(f"blade masks {a}, {b} do not fit dimension {n}")
    sign = _reorder_sign(a, b)
    if grade_of(a & b) & 1:
        sign = -sign
    return sign, a ^ b


def blade_product_oracle(a: int, b: int) -> tuple[int, int]:
    """Reference product: bubble-sort the generator word, cancel ``e_j e_j = -1``.

    Deliberately naive; used only to cross-check :func:`blade_product`.
    """
    word = [j for j in range(MAX_DIM) if a >> j & 1] + [j for j in range(MAX_DIM) if b >> j & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
            elif word[i] == word[i + 1]:
                del word[i:i + 2]
                sign = -sign
                changed = True
                break
    mask = 0
    for j in word:
        mask |= 1 << j
    return sign, mask


@lru_cache(maxsize=None)
def product_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(signs, masks)`` Cayley tables of shape ``(2**n, 2**n)``."""
    _check_dim(n)
    size = 1 << n
    idx = np.arange(size)
    masks = idx[:, None] ^ idx[None, :]
    signs = np.empty((size, size), dtype=np.int8)
    for a in range(size):
        for b in range(size):
            signs[a, b] = blade_product(a, b)[0]
    signs.setflags(write=False)
    masks.setflags(write=False)
    return signs, masks


@lru_cache(maxsize=None)
def grades(n: int) -> np.ndarray:
    g = np.array([grade_of(m) for m in range(1 << n)])
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def involution_signs(n: int) -> dict[str, np.ndarray]:
    k = grades(n)
    out = {
        "main": (-1.0) ** k,
        "reversion": (-1.0) ** (k * (k - 1) // 2),
        "conjugation": (-1.0) ** (k * (k + 1) // 2),
    }
    for v in out.values():
        v.setflags(write=False)
    return out


def dim_from_channels(channels: int) -> int:
    n = channels.bit_length() - 1
    if channels != 1 << n:
        raise DimensionError(f"{channels} channels is not a power of two")
    _check_dim(n)
    return n


def product_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Geometric product of coefficient arrays with leading blade axis.

    Trailing axes broadcast, so this serves single multivectors, sampled
    fields, and a multivector constant applied to a field alike.
    """
    n = dim_from_channels(a.shape[0])
    if b.shape[0] != a.shape[0]:
        raise DimensionError("blade axis length mismatch")
    signs, masks = product_tables(n)
    size = 1 << n
    tail = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((size,) + tail, dtype=np.result_type(a, b, np.complex128))
    expand = (slice(None),) + (None,) * len(tail)
    for i in range(size):
        if not np.any(a[i]):
            continue
        # masks[i] is a permutation, so fancy-index accumulation is safe
        out[masks[i]] += signs[i][expand] * a[i] * b
    return out


def hermitian_arrays(a: np.ndarray) -> np.ndarray:
    n = dim_from_channels(a.shape[0])
    s = involution_signs(n)["conjugation"]
    return s.reshape((-1,) + (1,) * (a.ndim - 1)) * np.conj(a)


class Multivector:
    """Immutable element of the complexified Clifford algebra."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=None):
        _check_dim(n)
        size = 1 << n
        if coeffs is None:
            arr = np.zeros(size, dtype=np.complex128)
        else:
            arr = np.array(coeffs, dtype=np.complex128).reshape(-1)
            if arr.shape != (size,):
                raise DimensionError(f"expected {size} coefficients, got {arr.size}")
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors
    @classmethod
    def scalar(cls, n: int, value: complex = 1.0) -> Multivector:
        c = np.zeros(1 << n, dtype=np.complex128)
        c[0] = value
        return cls(n, c)

    @classmethod
    def blade(cls, n: int, mask: int, value: complex = 1.0) -> Multivector:
        if not 0 <= mask < 1 << n:
            raise DimensionError(f"mask {mask} out of range for n={n}")
        c = np.zeros(1 << n, dtype=np.complex128)
        c[mask] = value
        return cls(n, c)

    @classmethod
    def vector(cls, components: Sequence[float]) -> Multivector:
        return embed(components)

    # arithmetic
    def _coerce(self, other) -> Multivector | None:
        if isinstance(other, Multivector):
            if other.n != self.n:
                raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Multivector.scalar(self.n, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector(self.n, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector(self.n, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector(self.n, o.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Multivector(self.n, self.coeffs * other)
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Multivector(self.n, self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Multivector(self.n, self.coeffs / other)
        return NotImplemented

    def __getitem__(self, mask: int) -> complex:
        return complex(self.coeffs[mask])

    def __repr__(self) -> str:
        return f"Multivector({self.n}, {format_multivector(self)!r})"

    def __str__(self) -> str:
        return format_multivector(self)

    def allclose(self, other, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        o = self._coerce(other)
        return bool(np.allclose(self.coeffs, o.coeffs, atol=atol, rtol=rtol))

    def is_real(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs.imag) <= atol))


def _same_dim(a: Multivector, b: Multivector) -> None:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    _same_dim(a, b)
    signs, masks = product_tables(a.n)
    terms = signs * np.outer(a.coeffs, b.coeffs)
    size = 1 << a.n
    flat = masks.ravel()
    re = np.bincount(flat, weights=terms.real.ravel(), minlength=size)
    im = np.bincount(flat, weights=terms.imag.ravel(), minlength=size)
    return Multivector(a.n, re + 1j * im)


def main_involution(a: Multivector) -> Multivector:
    return Multivector(a.n, involution_signs(a.n)["main"] * a.coeffs)


def reversion(a: Multivector) -> Multivector:
    return Multivector(a.n, involution_signs(a.n)["reversion"] * a.coeffs)


def conjugation(a: Multivector) -> Multivector:
    return Multivector(a.n, involution_signs(a.n)["conjugation"] * a.coeffs)


def hermitian_conjugation(a: Multivector) -> Multivector:
    """``(x + iy)^dagger = conj(x) - i conj(y)``: Clifford conjugation plus complex conjugation."""
    return Multivector(a.n, involution_signs(a.n)["conjugation"] * np.conj(a.coeffs))


def embed(x: Sequence[float]) -> Multivector:
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    c = np.zeros(1 << n, dtype=np.complex128)
    for j in range(n):
        c[1 << j] = x[j]
    return Multivector(n, c)


def vector_part(a: Multivector) -> np.ndarray:
    return np.array([a.coeffs[1 << j] for j in range(a.n)])


def dot(x: Sequence[float], y: Sequence[float]) -> float:
    """Clifford dot product of vectors, ``-<x, y>``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError("vector length mismatch")
    return -float(np.dot(x, y))


def wedge(x: Sequence[float], y: Sequence[float]) -> Multivector:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError("vector length mismatch")
    n = x.size
    c = np.zeros(1 << n, dtype=np.complex128)
    for j in range(n):
        for k in range(j + 1, n):
            c[(1 << j) | (1 << k)] = x[j] * y[k] - x[k] * y[j]
    return Multivector(n, c)


def grade_projection(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.n:
        raise ValueError(f"grade {k} outside [0, {a.n}]")
    return Multivector(a.n, np.where(grades(a.n) == k, a.coeffs, 0))


def scalar_part(a: Multivector) -> complex:
    return complex(a.coeffs[0])


def magnitude(a: Multivector) -> float:
    """Euclidean norm of the coefficient array."""
    return float(np.sqrt(np.sum(np.abs(a.coeffs) ** 2)))


# text form: "-11 - 2 e12", "(1+2j) e1 + 3"


def blade_label(mask: int) -> str:
    if mask == 0:
        return ""
    return "e" + "".join(str(j + 1) for j in range(MAX_DIM) if mask >> j & 1)


def _fmt_coeff(c: complex) -> str:
    if c.imag == 0.0:
        return f"{c.real:.17g}"
    return f"({c.real:.17g}{c.imag:+.17g}j)"


def format_multivector(a: Multivector) -> str:
    parts: list[str] = []
    for mask in sorted(range(1 << a.n), key=lambda m: (grade_of(m), m)):
        c = complex(a.coeffs[mask])
        if c == 0:
            continue
        negative = c.imag == 0.0 and c.real < 0
        body = _fmt_coeff(-c if negative else c)
        label = blade_label(mask)
        term = f"{body} {label}" if label else body
        if not parts:
            parts.append(f"-{term}" if negative else term)
        else:
            parts.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(parts) if parts else "0"


_TERM = re.compile(
    r"^(?P<coef>\([^)]*\)|[+\-]?(?:inf|nan|[0-9.])[0-9.eE+\-]*)?\s*(?P<blade>e[1-8]+)?$"
)


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and text[i - 1 : i] == " " and text[i + 1 : i + 2] == " ":
            terms.append(cur.strip())
            cur = ch
            i += 2
            continue
        cur += ch
        i += 1
    terms.append(cur.strip())
    return [t for t in terms if t]


def parse_multivector(text: str, n: int) -> Multivector:
    """Inverse of :func:`format_multivector`."""
    c = np.zeros(1 << n, dtype=np.complex128)
    text = text.strip()
    if text == "0":
        return Multivector(n, c)
    for term in _split_terms(text):
        sign = 1.0
        if term.startswith("-") and not re.match(r"^-[0-9.]", term):
            sign, term = -1.0, term[1:].strip()
        elif term.startswith("+"):
            term = term[1:].strip()
        elif term.startswith("- "):
            sign, term = -1.0, term[2:].strip()
        m = _TERM.match(term)
        if m is None or (m.group("coef") is None and m.group("blade") is None):
            raise ValueError(f"cannot parse term {term!r}")
        coef = m.group("coef")
        value = complex(coef.strip("()")) if coef else 1.0
        mask = 0
        if m.group("blade"):
            for ch in m.group("blade")[1:]:
                j = int(ch) - 1
                if j >= n:
                    raise DimensionError(f"generator e{j + 1} outside dimension {n}")
                mask |= 1 << j
        c[mask] += sign * value
    return Multivector(n, c)
