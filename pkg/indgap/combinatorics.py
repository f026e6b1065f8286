"""
Bell-polynomial combinatorics behind the derivative bounds: index tuples of
Arbogast's formula, partial Bell polynomials, Stirling numbers of the second
kind and ordered Bell numbers.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Any, Iterator, List, Sequence, Tuple

logger = logging.getLogger(__name__)


def _tuples(length: int, weight: int, count: int | None) -> Iterator[Tuple[int, ...]]:
    """Tuples (i_1..i_length) with sum m*i_m = weight (and sum i_m = count if given)."""
    def rec(m: int, weight_left: int, count_left: int | None) -> Iterator[Tuple[int, ...]]:
        if m == 0:
            if weight_left == 0 and (count_left is None or count_left == 0):
                yield ()
            return
        top = weight_left // m
        if count_left is not None:
            top = min(top, count_left)
        for i in range(top, -1, -1):
            rest = None if count_left is None else count_left - i
            for head in rec(m - 1, weight_left - m * i, rest):
                yield head + (i,)

    yield from rec(length, weight, count)


def index_tuples(N: int, K: int) -> Iterator[Tuple[int, ...]]:
    """(i_1..i_{N-K+1}) with i_1 + 2 i_2 + ... = N and i_1 + i_2 + ... = K."""
    if not 0 <= K <= N:
        raise ValueError(f"Need 0 <= K <= N, got N={N}, K={K}")
    yield from _tuples(N - K + 1, N, K)


def partial_bell(N: int, K: int, x: Sequence[Any]) -> Any:
    """Partial exponential Bell polynomial B_{N,K}(x_1, ..., x_{N-K+1})."""
    if not 0 <= K <= N:
        raise ValueError(f"Need 0 <= K <= N, got N={N}, K={K}")
    if len(x) < N - K + 1:
        raise ValueError(f"B_{{{N},{K}}} needs {N - K + 1} arguments, got {len(x)}")
    total = Fraction(0)
    for idx in index_tuples(N, K):
        term = Fraction(factorial(N), prod(factorial(i) for i in idx))
        for m, i in enumerate(idx, start=1):
            if i:
                term = term * (Fraction(x[m - 1]) / factorial(m)) ** i
        total += term
    return total


@lru_cache(maxsize=None)
def stirling2(N: int, K: int) -> int:
    if N == K:
        return 1
    if K == 0 or K > N:
        return 0
    return K * stirling2(N - 1, K) + stirling2(N - 1, K - 1)


def ordered_bell(N: int) -> int:
    """Number of ordered set partitions, sum_K K! S(N, K)."""
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    return sum(factorial(K) * stirling2(N, K) for K in range(N + 1))


def ordered_bell_recurrence(N: int) -> List[int]:
    """B~_0..B~_N from B~_n = sum_{i<n} C(n, i) B~_i."""
    values = [1]
    for n in range(1, N + 1):
        values.append(sum(comb(n, i) * values[i] for i in range(n)))
    return values


def ln2_upper_bound(terms: int = 64) -> Fraction:
    """Rational upper bound for ln 2 = sum_k 1/(k 2^k), with the tail bounded by 1/((m+1) 2^m)."""
    partial = sum((Fraction(1, k * 2 ** k) for k in range(1, terms + 1)), Fraction(0))
    return partial + Fraction(1, (terms + 1) * 2 ** terms)


def bell_bound_holds(N: int) -> bool:
    """B~_N / N! <= (1/ln 2)^N, certified with a rational lower bound for 1/ln 2."""
    inverse_ln2_lower = 1 / ln2_upper_bound()
    return Fraction(ordered_bell(N), factorial(N)) <= inverse_ln2_lower ** N


def composition_count_check(N: int, K: int) -> bool:
    """sum K!/(i_1!...) over index tuples equals the composition count C(N-1, K-1)."""
    if not 1 <= K <= N:
        raise ValueError(f"Need 1 <= K <= N, got N={N}, K={K}")
    lhs = sum(Fraction(factorial(K), prod(factorial(i) for i in idx)) for idx in index_tuples(N, K))
    return lhs == comb(N - 1, K - 1)


def faa_di_bruno_coeffs(N: int) -> List[Tuple[int, Tuple[int, ...], int]]:
    """
    Terms of (f o g)^(N) as (K, (i_1..i_N), c) meaning c * f^(K)(g) * prod (g^(m))^(i_m),
    with c = N! / prod(i_m! (m!)^(i_m)) and K = sum i_m.
    """
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    terms = []
    for idx in _tuples(N, N, None):
        multiplier = factorial(N) // prod(factorial(i) * factorial(m) ** i for m, i in enumerate(idx, start=1))
        terms.append((sum(idx), idx, multiplier))
    terms.sort(key=lambda t: (t[0], t[1]))
    return terms


def compose_derivatives(f_derivs: Sequence[Any], g_derivs: Sequence[Any], N: int) -> Any:
    """
    (f o g)^(N)(z) from f_derivs[k] = f^(k)(g(z)) and g_derivs[m] = g^(m)(z), by Arbogast's formula.
    """
    if N == 0:
        return f_derivs[0]
    total = 0
    for K, idx, multiplier in faa_di_bruno_coeffs(N):
        term = multiplier * f_derivs[K]
        for m, i in enumerate(idx, start=1):
            if i:
                term = term * g_derivs[m] ** i
        total = total + term
    return total


def reciprocal_derivatives(h_derivs: Sequence[Any], N: int) -> List[Any]:
    """(1/h)^(j) for j = 0..N given h_derivs[m] = h^(m)(z), h(z) != 0."""
    h = h_derivs[0]
    if isinstance(h, int):
        h = Fraction(h)
    f_derivs = [(-1) ** K * factorial(K) / h ** (K + 1) for K in range(N + 1)]
    return [compose_derivatives(f_derivs, h_derivs, j) for j in range(N + 1)]
