"""
Arbor Strings.

Finite strings of naturals are the universal node object of the workbench. A string is a plain tuple of ints; the
empty tuple is the root. This module provides the prefix order and incomparability, the `<0` total order used by the
ascending/descending sequence reduction, the prime-power string code, and Cantor pairing for timestamped trees.

Imports:
    - functools: Memoisation of the prime table and string codes.
    - sympy: Prime enumeration and integer factorisation.

Functions:
    - is_prefix: Strict prefix test.
    - is_prefix_eq: Reflexive prefix test.
    - incomparable: Incomparability under the prefix order.
    - order_lt0: The `<0` comparison.
    - phi_code: Prime-power code of a string.
    - phi_decode: Inverse of phi_code.
    - flip_last: Flip the last bit of a binary string.
    - pair: Cantor pairing.
    - unpair: Inverse of Cantor pairing.
    - format_str: Render a string in the line-oriented file format.
    - parse_str: Parse a string from the line-oriented file format.
"""

from collections.abc import Iterable
from functools import lru_cache
from math import isqrt

from sympy import factorint, prime

from arbor.core.model.errors import ErrorCode, WorkbenchError

Str = tuple[int, ...]

EPSILON: Str = ()


def is_prefix(sigma: Str, tau: Str) -> bool:
    """
    Strict prefix: `sigma` is shorter than `tau` and agrees with it on every position of `sigma`.

    Args:
        sigma: The candidate prefix.
        tau: The longer string.

    Returns:
        Whether `sigma` is a strict prefix of `tau`.
    """
    return len(sigma) < len(tau) and tau[: len(sigma)] == sigma


def is_prefix_eq(sigma: Str, tau: Str) -> bool:
    """
    Reflexive prefix.

    Args:
        sigma: The candidate prefix.
        tau: The other string.

    Returns:
        Whether `sigma` is a prefix of or equal to `tau`.
    """
    return len(sigma) <= len(tau) and tau[: len(sigma)] == sigma


def comparable(sigma: Str, tau: Str) -> bool:
    return is_prefix_eq(sigma, tau) or is_prefix_eq(tau, sigma)


def incomparable(sigma: Str, tau: Str) -> bool:
    """
    True iff neither string is a prefix (or equal) of the other.

    Args:
        sigma: Left string.
        tau: Right string.

    Returns:
        Whether the strings are incomparable.
    """
    return not comparable(sigma, tau)


def first_difference(sigma: Str, tau: Str) -> int | None:
    """
    Least position where the strings disagree.

    Args:
        sigma: Left string.
        tau: Right string.

    Returns:
        The position, or None when one is a prefix of the other.
    """
    for position, (a, b) in enumerate(zip(sigma, tau)):
        if a != b:
            return position
    return None


def order_lt0(sigma: Str, tau: Str) -> bool:
    """
    Compare two distinct strings under `<0`.

    `sigma <0 tau` iff sigma is a strict prefix of tau, or the strings are incomparable and sigma is smaller at the
    first position where they differ. On any set of distinct strings this is a strict total order.

    Args:
        sigma: Left string.
        tau: Right string.

    Returns:
        Whether sigma <0 tau.

    Raises:
        WorkbenchError: EQUAL_INPUT if the strings are equal.
    """
    if sigma == tau:
        raise WorkbenchError(ErrorCode.EQUAL_INPUT, f"cannot compare {format_str(sigma)} with itself", (sigma,))
    if is_prefix(sigma, tau):
        return True
    if is_prefix(tau, sigma):
        return False
    d = first_difference(sigma, tau)
    assert d is not None  # noqa: S101
    return sigma[d] < tau[d]


@lru_cache(maxsize=None)
def nth_prime(index: int) -> int:
    """
    The prime at 0-based position `index` (2, 3, 5, ...).

    Args:
        index: The position.

    Returns:
        The prime.
    """
    return int(prime(index + 1))


@lru_cache(maxsize=1 << 16)
def phi_code(sigma: Str) -> int:
    """
    Prime-power code of a string.

    The code of `x_0 ... x_{n-1}` is `p_0^(x_0+1) * ... * p_{n-1}^(x_{n-1}+1) - 1`. The exponents are shifted by one
    so that the code is injective even on strings containing zeros. A strict prefix always has a strictly smaller
    code.

    Args:
        sigma: The string.

    Returns:
        Its code; the empty string codes to 0.
    """
    product = 1
    for position, item in enumerate(sigma):
        product *= nth_prime(position) ** (item + 1)
    return product - 1


def child_code(parent_code: int, depth: int, item: int) -> int:
    """
    Code of `parent + (item,)` computed from the parent's code.

    Args:
        parent_code: The phi_code of the parent.
        depth: The parent's length.
        item: The appended entry.

    Returns:
        The phi_code of the child.
    """
    return (parent_code + 1) * nth_prime(depth) ** (item + 1) - 1


def phi_decode(code: int) -> Str:
    """
    Decode a prime-power string code.

    Args:
        code: A natural number.

    Returns:
        The unique string whose phi_code is `code`.

    Raises:
        WorkbenchError: NOT_A_CODE if `code + 1` does not factor over an initial segment of the primes.
    """
    if code < 0:
        raise WorkbenchError(ErrorCode.NOT_A_CODE, f"{code} is negative", (code,))
    factors = factorint(code + 1)
    items = []
    for position, (p, exponent) in enumerate(sorted(factors.items())):
        if p != nth_prime(position):
            raise WorkbenchError(ErrorCode.NOT_A_CODE, f"{code} + 1 skips the prime {nth_prime(position)}", (code,))
        items.append(int(exponent) - 1)
    return tuple(items)


def is_binary(sigma: Str) -> bool:
    return all(item in (0, 1) for item in sigma)


def flip_last(sigma: Str) -> Str:
    """
    Replace the last bit of a nonempty binary string by its complement.

    Args:
        sigma: A nonempty binary string.

    Returns:
        The sibling of `sigma`.

    Raises:
        WorkbenchError: DOMAIN_MISMATCH for the empty string.
    """
    if not sigma:
        raise WorkbenchError(ErrorCode.DOMAIN_MISMATCH, "the empty string has no last bit")
    return (*sigma[:-1], 1 - sigma[-1])


def prefixes(sigma: Str, *, proper: bool = True) -> Iterable[Str]:
    """
    Prefixes of `sigma` from the shortest.

    Args:
        sigma: The string.
        proper: Exclude `sigma` itself.

    Yields:
        The prefixes by increasing length, starting with the empty string.
    """
    stop = len(sigma) if proper else len(sigma) + 1
    for length in range(stop):
        yield sigma[:length]


def pair(a: int, b: int) -> int:
    """
    Cantor pairing of two naturals.

    Args:
        a: First natural.
        b: Second natural.

    Returns:
        The pair code.
    """
    return (a + b) * (a + b + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    """
    Inverse of Cantor pairing.

    Args:
        n: A pair code.

    Returns:
        The naturals `(a, b)` with `pair(a, b) == n`.
    """
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def format_str(sigma: Str) -> str:
    """
    Render a string as space-separated naturals, the empty string as `-`.

    Args:
        sigma: The string.

    Returns:
        One line of the file format.
    """
    return " ".join(str(item) for item in sigma) if sigma else "-"


def parse_str(text: str) -> Str:
    """
    Parse the output of format_str.

    Args:
        text: One line of the file format.

    Returns:
        The string.

    Raises:
        WorkbenchError: PARSE_ERROR on anything but naturals or `-`.
    """
    text = text.strip()
    if text == "-":
        return EPSILON
    try:
        items = tuple(int(token) for token in text.split())
    except ValueError as e:
        raise WorkbenchError(ErrorCode.PARSE_ERROR, f"not a string of naturals: {text!r}") from e
    if not items or any(item < 0 for item in items):
        raise WorkbenchError(ErrorCode.PARSE_ERROR, f"not a string of naturals: {text!r}")
    return items


def pretty(sigma: Str) -> str:
    """
    Angle-bracket rendering for messages, e.g. `<1,0>`; the empty string renders as `e`.

    Args:
        sigma: The string.

    Returns:
        The rendering.
    """
    return "<" + ",".join(str(item) for item in sigma) + ">" if sigma else "e"
