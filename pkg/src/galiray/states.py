"""Exact carrier family: polynomial times complex Gaussian states, and
polynomial-coefficient differential operators acting on them.

Every representation phase (quadratic in p) and every generator maps the
family to itself, so all checks run in closed form with no discretization.
Inner products reduce to complex Gaussian moment formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegreeOverflowError",
    "Polynomial",
    "PolyGaussianTerm",
    "PolyGaussianState",
    "PolyDiffOperator",
    "inner_product",
    "state_norm",
    "normalized",
    "random_state",
    "state_to_dict",
    "state_from_dict",
    "DEFAULT_MAX_DEGREE",
]

DEFAULT_MAX_DEGREE = 8

_SYM_TOL = 1e-12


class DegreeOverflowError(ValueError):
    """Raised when an operation would push a polynomial past the degree bound."""


class Polynomial:
    """Complex-coefficient polynomial in nvars variables, sparse over
    exponent tuples."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs=None):
        self.nvars = nvars
        self.coeffs: dict[tuple, complex] = {}
        if coeffs:
            for exps, c in coeffs.items():
                c = complex(c)
                if c != 0:
                    self.coeffs[tuple(int(e) for e in exps)] = c

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {tuple([0] * nvars): c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1.0})

    def copy(self) -> "Polynomial":
        return Polynomial(self.nvars, self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        if self.nvars != other.nvars:
            raise ValueError("polynomial variable count mismatch")
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            out[exps] = out.get(exps, 0.0) + c
        return Polynomial(self.nvars, out)

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = complex(other)
            return Polynomial(self.nvars,
                              {e: v * c for e, v in self.coeffs.items()})
        if self.nvars != other.nvars:
            raise ValueError("polynomial variable count mismatch")
        out: dict[tuple, complex] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0.0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def diff(self, i: int) -> "Polynomial":
        out: dict[tuple, complex] = {}
        for exps, c in self.coeffs.items():
            if exps[i] > 0:
                e = list(exps)
                e[i] -= 1
                key = tuple(e)
                out[key] = out.get(key, 0.0) + c * exps[i]
        return Polynomial(self.nvars, out)

    def eval(self, point) -> complex:
        point = np.asarray(point)
        total = 0.0 + 0.0j
        for exps, c in self.coeffs.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = term * x ** e
            total += term
        return complex(total)

    def subs_affine(self, M, c) -> "Polynomial":
        """Substitute variable_i -> sum_j M[i,j] q_j + c[i]."""
        n = self.nvars
        M = np.asarray(M)
        c = np.asarray(c)
        lines = []
        for i in range(n):
            coeffs = {}
            for j in range(n):
                if M[i, j] != 0:
                    e = [0] * n
                    e[j] = 1
                    coeffs[tuple(e)] = M[i, j]
            if c[i] != 0:
                coeffs[tuple([0] * n)] = c[i]
            lines.append(Polynomial(n, coeffs))
        powers: list[list[Polynomial]] = [[Polynomial.constant(n, 1.0)] for _ in range(n)]
        result = Polynomial(n)
        for exps, coef in self.coeffs.items():
            term = Polynomial.constant(n, coef)
            for i, e in enumerate(exps):
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * lines[i])
                if e:
                    term = term * powers[i][e]
            result = result + term
        return result

    def subs_var(self, i: int, value) -> "Polynomial":
        """Fix variable i to a numeric value (variable count unchanged)."""
        value = complex(value)
        out: dict[tuple, complex] = {}
        for exps, c in self.coeffs.items():
            e = list(exps)
            power = e[i]
            e[i] = 0
            key = tuple(e)
            out[key] = out.get(key, 0.0) + c * value ** power
        return Polynomial(self.nvars, out)

    def drop_var(self, i: int) -> "Polynomial":
        """Remove a variable that no monomial uses."""
        out = {}
        for exps, c in self.coeffs.items():
            if exps[i] != 0:
                raise ValueError("cannot drop a variable still in use")
            out[exps[:i] + exps[i + 1:]] = c
        return Polynomial(self.nvars - 1, out)

    def lift_var(self) -> "Polynomial":
        """Append one trailing variable (unused by existing monomials)."""
        return Polynomial(self.nvars + 1,
                          {exps + (0,): c for exps, c in self.coeffs.items()})

    def conj(self) -> "Polynomial":
        """Coefficient-wise conjugate; equals pointwise conjugation on
        real arguments."""
        return Polynomial(self.nvars,
                          {e: c.conjugate() for e, c in self.coeffs.items()})

    def __repr__(self):
        return f"Polynomial(nvars={self.nvars}, coeffs={self.coeffs})"


def _check_gamma(dim: int, Gamma: np.ndarray) -> np.ndarray:
    Gamma = np.asarray(Gamma, dtype=complex).reshape(dim, dim)
    if np.max(np.abs(Gamma - Gamma.T)) > _SYM_TOL:
        raise ValueError("Gamma must be symmetric")
    re_eigs = np.linalg.eigvalsh(Gamma.real)
    if np.max(re_eigs) >= 0.0:
        raise ValueError("Re(Gamma) must be negative-definite")
    return Gamma


@dataclass(frozen=True, eq=False)
class PolyGaussianTerm:
    """poly(p) * exp(alpha + <beta, p> + p^T Gamma p)."""

    poly: Polynomial
    alpha: complex
    beta: np.ndarray
    Gamma: np.ndarray

    def evaluate(self, p) -> complex:
        p = np.asarray(p)
        expo = self.alpha + np.dot(self.beta, p) + p @ self.Gamma @ p
        return self.poly.eval(p) * complex(np.exp(expo))


class PolyGaussianState:
    """Finite sum of polynomial-Gaussian terms in dim variables."""

    def __init__(self, dim: int, terms):
        self.dim = dim
        checked = []
        for term in terms:
            if term.poly.nvars != dim:
                raise ValueError("term polynomial has wrong variable count")
            beta = np.asarray(term.beta, dtype=complex).reshape(dim)
            Gamma = _check_gamma(dim, term.Gamma)
            checked.append(PolyGaussianTerm(term.poly, complex(term.alpha),
                                            beta, Gamma))
        self.terms = tuple(checked)

    @classmethod
    def gaussian(cls, dim: int, alpha=0.0, beta=None, Gamma=None,
                 poly=None) -> "PolyGaussianState":
        if beta is None:
            beta = np.zeros(dim, dtype=complex)
        if Gamma is None:
            Gamma = -0.5 * np.eye(dim, dtype=complex)
        if poly is None:
            poly = Polynomial.constant(dim, 1.0)
        term = PolyGaussianTerm(poly, complex(alpha),
                                np.asarray(beta, dtype=complex),
                                np.asarray(Gamma, dtype=complex))
        return cls(dim, [term])

    def evaluate(self, p) -> complex:
        p = np.asarray(p)
        if p.shape != (self.dim,):
            raise ValueError(f"point must have shape ({self.dim},)")
        return sum((t.evaluate(p) for t in self.terms), 0.0 + 0.0j)

    def substitute(self, W, shift) -> "PolyGaussianState":
        """New state g with g(p) = self(W^{-1}(p + shift))."""
        W = np.asarray(W, dtype=float)
        shift = np.asarray(shift, dtype=complex).reshape(self.dim)
        M = W.T
        c = M @ shift
        out = []
        for t in self.terms:
            Gamma = M.T @ t.Gamma @ M
            beta = M.T @ t.beta + 2.0 * (M.T @ (t.Gamma @ c))
            alpha = t.alpha + np.dot(t.beta, c) + c @ t.Gamma @ c
            out.append(PolyGaussianTerm(t.poly.subs_affine(M, c),
                                        complex(alpha), beta, Gamma))
        return PolyGaussianState(self.dim, out)

    def multiply_phase(self, quad=None, lin=None, const=0.0) -> "PolyGaussianState":
        """Multiply by exp(const + <lin, p> + p^T quad p); the arguments are
        the complex exponent increments."""
        dim = self.dim
        quad = (np.zeros((dim, dim), dtype=complex) if quad is None
                else np.asarray(quad, dtype=complex).reshape(dim, dim))
        lin = (np.zeros(dim, dtype=complex) if lin is None
               else np.asarray(lin, dtype=complex).reshape(dim))
        const = complex(const)
        out = [PolyGaussianTerm(t.poly, t.alpha + const, t.beta + lin,
                                t.Gamma + quad) for t in self.terms]
        # PolyGaussianState re-validates Re(Gamma), guarding non-imaginary quads
        return PolyGaussianState(dim, out)

    def scale(self, c) -> "PolyGaussianState":
        out = [PolyGaussianTerm(t.poly * c, t.alpha, t.beta, t.Gamma)
               for t in self.terms]
        return PolyGaussianState(self.dim, out)

    def add(self, other: "PolyGaussianState") -> "PolyGaussianState":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return PolyGaussianState(self.dim, self.terms + other.terms)

    def conjugated(self) -> "PolyGaussianState":
        out = [PolyGaussianTerm(t.poly.conj(), t.alpha.conjugate(),
                                t.beta.conjugate(), t.Gamma.conjugate())
               for t in self.terms]
        return PolyGaussianState(self.dim, out)

    def center(self) -> np.ndarray:
        """Peak of the leading term's Gaussian envelope."""
        t = self.terms[0]
        return np.linalg.solve(-2.0 * t.Gamma.real, t.beta.real)

    def max_degree(self) -> int:
        return max((t.poly.degree() for t in self.terms), default=0)


@dataclass(frozen=True, eq=False)
class PolyDiffOperator:
    """Sum of coeff(p, t) * d^k/dp^k terms, derivatives right-most.

    Coefficients are polynomials in dim + 1 variables, the trailing one
    being the external time parameter t.
    """

    dim: int
    terms: tuple  # of (Polynomial in dim+1 vars, deriv multi-index tuple)

    @classmethod
    def build(cls, dim: int, raw_terms) -> "PolyDiffOperator":
        collected: dict[tuple, Polynomial] = {}
        for coeff, deriv in raw_terms:
            deriv = tuple(int(k) for k in deriv)
            if len(deriv) != dim:
                raise ValueError("derivative multi-index has wrong length")
            if not isinstance(coeff, Polynomial):
                coeff = Polynomial.constant(dim + 1, coeff)
            if coeff.nvars != dim + 1:
                raise ValueError("coefficient must use dim+1 variables")
            if deriv in collected:
                collected[deriv] = collected[deriv] + coeff
            else:
                collected[deriv] = coeff
        terms = tuple((c, d) for d, c in sorted(collected.items())
                      if not c.is_zero())
        return cls(dim, terms)

    @classmethod
    def zero(cls, dim: int) -> "PolyDiffOperator":
        return cls.build(dim, [])

    @classmethod
    def identity(cls, dim: int) -> "PolyDiffOperator":
        return cls.build(dim, [(1.0, (0,) * dim)])

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "PolyDiffOperator":
        """Multiplication by the i-th coordinate."""
        return cls.build(dim, [(Polynomial.variable(dim + 1, i), (0,) * dim)])

    @classmethod
    def derivative(cls, dim: int, i: int) -> "PolyDiffOperator":
        deriv = [0] * dim
        deriv[i] = 1
        return cls.build(dim, [(1.0, tuple(deriv))])

    @classmethod
    def time_poly(cls, dim: int, degree: int = 1) -> "Polynomial":
        """The coefficient polynomial t**degree."""
        exps = [0] * (dim + 1)
        exps[dim] = degree
        return Polynomial(dim + 1, {tuple(exps): 1.0})

    def __add__(self, other: "PolyDiffOperator") -> "PolyDiffOperator":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return PolyDiffOperator.build(self.dim,
                                      list(self.terms) + list(other.terms))

    def __sub__(self, other: "PolyDiffOperator") -> "PolyDiffOperator":
        return self + other.scale(-1.0)

    def scale(self, c) -> "PolyDiffOperator":
        return PolyDiffOperator.build(self.dim,
                                      [(coeff * c, d) for coeff, d in self.terms])

    def compose(self, other: "PolyDiffOperator") -> "PolyDiffOperator":
        """Operator product self . other via the Leibniz rule; t is a
        parameter, untouched by the derivatives."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        dim = self.dim
        raw = []
        for cA, a in self.terms:
            for cB, b in other.terms:
                for j in _sub_multi_indices(a):
                    coeff = cB
                    for i in range(dim):
                        for _ in range(j[i]):
                            coeff = coeff.diff(i)
                    if coeff.is_zero():
                        continue
                    binom = 1
                    for i in range(dim):
                        binom *= math.comb(a[i], j[i])
                    deriv = tuple(a[i] - j[i] + b[i] for i in range(dim))
                    raw.append((cA * coeff * binom, deriv))
        return PolyDiffOperator.build(dim, raw)

    def commutator(self, other: "PolyDiffOperator") -> "PolyDiffOperator":
        return self.compose(other) - other.compose(self)

    def d_dt(self) -> "PolyDiffOperator":
        """Exact derivative in the external parameter t."""
        return PolyDiffOperator.build(
            self.dim, [(coeff.diff(self.dim), d) for coeff, d in self.terms])

    def at_time(self, t: float) -> "PolyDiffOperator":
        return PolyDiffOperator.build(
            self.dim, [(coeff.subs_var(self.dim, t), d)
                       for coeff, d in self.terms])

    def norm(self) -> float:
        """Largest coefficient magnitude; zero iff the operator is zero."""
        return max((coeff.max_abs() for coeff, _ in self.terms), default=0.0)

    def apply(self, state: PolyGaussianState, t: float = 0.0,
              max_degree: int = DEFAULT_MAX_DEGREE) -> PolyGaussianState:
        """Exact action on a state, with t fixed numerically."""
        if state.dim != self.dim:
            raise ValueError("dimension mismatch")
        dim = self.dim
        out_terms = []
        for coeff, deriv in self.terms:
            coeff_p = coeff.subs_var(dim, t).drop_var(dim)
            for term in state.terms:
                poly = term.poly
                for i in range(dim):
                    for _ in range(deriv[i]):
                        poly = _poly_after_derivative(poly, term, i)
                poly = poly * coeff_p
                if poly.degree() > max_degree:
                    raise DegreeOverflowError(
                        f"degree {poly.degree()} exceeds bound {max_degree}")
                if not poly.is_zero():
                    out_terms.append(PolyGaussianTerm(poly, term.alpha,
                                                      term.beta, term.Gamma))
        if not out_terms:
            zero_term = PolyGaussianTerm(Polynomial(dim), 0.0,
                                         np.zeros(dim, dtype=complex),
                                         -0.5 * np.eye(dim, dtype=complex))
            out_terms = [zero_term]
        return PolyGaussianState(dim, out_terms)


def _poly_after_derivative(poly: Polynomial, term: PolyGaussianTerm,
                           i: int) -> Polynomial:
    # d/dp_i [poly e^g] = (poly' + poly (beta_i + 2 (Gamma p)_i)) e^g
    dim = poly.nvars
    lin = {tuple([0] * dim): term.beta[i]}
    for j in range(dim):
        g = term.Gamma[i, j]
        if g != 0:
            e = [0] * dim
            e[j] = 1
            lin[tuple(e)] = 2.0 * g
    return poly.diff(i) + poly * Polynomial(dim, lin)


def _sub_multi_indices(a):
    """All multi-indices j with 0 <= j <= a componentwise."""
    if not a:
        yield ()
        return
    for head in range(a[0] + 1):
        for tail in _sub_multi_indices(a[1:]):
            yield (head,) + tail


def _central_moment(Sigma: np.ndarray, exps: tuple,
                    cache: dict) -> complex:
    """E[q^exps] for a centered Gaussian with complex covariance Sigma."""
    total_deg = sum(exps)
    if total_deg == 0:
        return 1.0 + 0.0j
    if total_deg % 2 == 1:
        return 0.0 + 0.0j
    if exps in cache:
        return cache[exps]
    a = next(i for i, e in enumerate(exps) if e > 0)
    rest = list(exps)
    rest[a] -= 1
    total = 0.0 + 0.0j
    for b, count in enumerate(rest):
        if count > 0:
            nxt = list(rest)
            nxt[b] -= 1
            total += count * Sigma[a, b] * _central_moment(Sigma, tuple(nxt), cache)
    cache[exps] = total
    return total


def _gaussian_integral(poly: Polynomial, alpha: complex, beta: np.ndarray,
                       Gamma: np.ndarray) -> complex:
    """Integral of poly(p) exp(alpha + <beta,p> + p^T Gamma p) over R^dim."""
    dim = poly.nvars
    A = -2.0 * Gamma
    re_eigs = np.linalg.eigvalsh(A.real)
    if np.min(re_eigs) <= 0.0:
        raise ValueError("non-integrable Gaussian combination")
    m = np.linalg.solve(A, beta)
    Sigma = np.linalg.inv(A)
    # Re(A) positive-definite puts every eigenvalue in the right half-plane,
    # so the principal square root is the branch continuous from real A.
    eigs = np.linalg.eigvals(A)
    det_root = np.prod(np.sqrt(eigs))
    prefactor = (2.0 * math.pi) ** (dim / 2.0) / det_root
    prefactor *= np.exp(alpha + 0.5 * np.dot(beta, m))
    shifted = poly.subs_affine(np.eye(dim), m)
    cache: dict = {}
    total = 0.0 + 0.0j
    for exps, c in shifted.coeffs.items():
        total += c * _central_moment(Sigma, exps, cache)
    return complex(prefactor * total)


def inner_product(f: PolyGaussianState, g: PolyGaussianState) -> complex:
    """<f, g> = integral of conj(f(p)) g(p) over R^dim, in closed form."""
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    total = 0.0 + 0.0j
    for tf in f.terms:
        for tg in g.terms:
            poly = tf.poly.conj() * tg.poly
            alpha = tf.alpha.conjugate() + tg.alpha
            beta = tf.beta.conjugate() + tg.beta
            Gamma = tf.Gamma.conjugate() + tg.Gamma
            total += _gaussian_integral(poly, alpha, beta, Gamma)
    return total


def state_norm(f: PolyGaussianState) -> float:
    return math.sqrt(max(inner_product(f, f).real, 0.0))


def normalized(f: PolyGaussianState) -> PolyGaussianState:
    n = state_norm(f)
    if n == 0.0:
        raise ValueError("cannot normalize the zero state")
    return f.scale(1.0 / n)


def random_state(rng, dim: int, poly_degree: int = 0,
                 n_terms: int = 1) -> PolyGaussianState:
    """Seeded random normalizable state; poly_degree 0 gives pure Gaussians
    (nowhere zero, which the ratio extraction relies on)."""
    rng = np.random.default_rng(rng)
    terms = []
    for _ in range(n_terms):
        B = rng.normal(size=(dim, dim))
        re_g = -(0.5 * B @ B.T + (0.4 + rng.uniform(0, 0.3)) * np.eye(dim))
        C = rng.normal(size=(dim, dim)) * 0.25
        Gamma = re_g + 1j * (C + C.T) / 2.0
        beta = rng.normal(size=dim) * 0.5 + 1j * rng.normal(size=dim) * 0.5
        alpha = complex(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2))
        if poly_degree > 0:
            coeffs = {tuple([0] * dim): 1.0 + 0.0j}
            for exps in _monomials_up_to(dim, poly_degree):
                if sum(exps) > 0:
                    coeffs[exps] = complex(rng.normal(), rng.normal()) * 0.3
            poly = Polynomial(dim, coeffs)
        else:
            poly = Polynomial.constant(dim, 1.0)
        terms.append(PolyGaussianTerm(poly, alpha, beta, Gamma))
    return PolyGaussianState(dim, terms)


def _monomials_up_to(dim: int, degree: int):
    if dim == 0:
        yield ()
        return
    for head in range(degree + 1):
        for tail in _monomials_up_to(dim - 1, degree - head):
            yield (head,) + tail


def _complex_to_pair(z: complex):
    return [float(z.real), float(z.imag)]


def state_to_dict(f: PolyGaussianState) -> dict:
    terms = []
    for t in f.terms:
        poly = [list(exps) + _complex_to_pair(c)
                for exps, c in sorted(t.poly.coeffs.items())]
        terms.append({
            "poly": poly,
            "alpha": _complex_to_pair(t.alpha),
            "beta": [_complex_to_pair(z) for z in t.beta],
            "Gamma": [_complex_to_pair(z) for z in t.Gamma.reshape(-1)],
        })
    return {"dim": f.dim, "terms": terms}


def state_from_dict(d: dict) -> PolyGaussianState:
    dim = int(d["dim"])
    terms = []
    for td in d["terms"]:
        coeffs = {}
        for row in td["poly"]:
            exps = tuple(int(e) for e in row[:dim])
            coeffs[exps] = complex(row[dim], row[dim + 1])
        alpha = complex(td["alpha"][0], td["alpha"][1])
        beta = np.array([complex(a, b) for a, b in td["beta"]])
        Gamma = np.array([complex(a, b) for a, b in td["Gamma"]]).reshape(dim, dim)
        terms.append(PolyGaussianTerm(Polynomial(dim, coeffs), alpha, beta, Gamma))
    return PolyGaussianState(dim, terms)
