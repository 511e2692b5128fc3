"""Pauli string algebra and error family construction."""
from itertools import combinations, product
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from src.config import settings
from src.exceptions import PauliError
from src.models.pauli import ErrorFamily, FamilyKind, PauliOperator

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

# Single-site products a*b = phase * c, phase as a power of i.
_SITE_PRODUCTS = {
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
}


def parse_pauli(label: str, sign: int = 1) -> PauliOperator:
    """
    Parse a Pauli string such as ``"YXX"`` or ``"-IZI"``.

    Args:
        label: String over {I, X, Y, Z}, optionally prefixed by ``-``
        sign: Overall sign, +1 or -1

    Returns:
        PauliOperator: Operator with matching per-site factors
    """
    if sign not in (1, -1):
        raise PauliError(f"Pauli sign must be +1 or -1, got {sign}")
    text = label.strip()
    if text.startswith("-"):
        sign, text = -sign, text[1:]
    elif text.startswith("+"):
        text = text[1:]
    if not text:
        raise PauliError("Empty Pauli label")

    x_bits = z_bits = 0
    for char in text.upper():
        if char not in _LETTER_BITS:
            raise PauliError(f"Malformed Pauli character {char!r} in {label!r}")
        x, z = _LETTER_BITS[char]
        x_bits = (x_bits << 1) | x
        z_bits = (z_bits << 1) | z
    return PauliOperator(len(text), x_bits, z_bits, sign)


def format_pauli(op: PauliOperator) -> str:
    """Inverse of parse_pauli."""
    return op.label


def pauli_from_sites(n: int, sites: Mapping[int, str], sign: int = 1) -> PauliOperator:
    """Build an operator from a {site: letter} map with 1-based sites."""
    letters = ["I"] * n
    for site, letter in sites.items():
        if not 1 <= site <= n:
            raise PauliError(f"Site {site} outside 1..{n}")
        letters[site - 1] = letter
    return parse_pauli("".join(letters), sign)


def single_site(n: int, site: int, letter: str) -> PauliOperator:
    return pauli_from_sites(n, {site: letter})


def dense_matrix(op: PauliOperator, qubit_cap: Optional[int] = None) -> np.ndarray:
    """
    Materialize an operator as a dense 2^n x 2^n matrix.

    P|c> = sign * i^{#Y} * (-1)^{|z & c|} |c xor x>.
    """
    cap = settings.dense_qubit_cap if qubit_cap is None else qubit_cap
    if op.n > cap:
        raise PauliError(f"Dense materialization capped at {cap} qubits, got {op.n}")

    dim = 1 << op.n
    cols = np.arange(dim, dtype=np.int64)
    rows = cols ^ op.x_bits
    masked = cols & op.z_bits
    parity = np.zeros(dim, dtype=np.int64)
    for bit in range(op.n):
        parity ^= (masked >> bit) & 1

    y_count = bin(op.x_bits & op.z_bits).count("1")
    phase = op.sign * (1j ** y_count)
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[rows, cols] = phase * (1 - 2 * parity)
    return matrix


def _check_arity(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise PauliError(f"Qubit count mismatch: {a.n} vs {b.n}")


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """Symplectic commutation test."""
    _check_arity(a, b)
    overlap = bin(a.x_bits & b.z_bits).count("1") + bin(a.z_bits & b.x_bits).count("1")
    return overlap % 2 == 0


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """
    Product of two commuting operators with exact sign tracking.

    Raises:
        PauliError: if the operators anticommute (the product is not Hermitian)
    """
    if not commutes(a, b):
        raise PauliError(f"{a.label} and {b.label} anticommute")

    power = 0
    letters = []
    for left, right in zip(a.letters, b.letters):
        if left == "I":
            letters.append(right)
        elif right == "I":
            letters.append(left)
        elif left == right:
            letters.append("I")
        else:
            step, letter = _SITE_PRODUCTS[(left, right)]
            power += step
            letters.append(letter)
    # commuting strings accumulate a real phase
    sign = a.sign * b.sign * (1 if power % 4 == 0 else -1)
    return parse_pauli("".join(letters), sign)


def _all_strings(n: int, weight: int) -> list[PauliOperator]:
    ops = []
    for sites in combinations(range(1, n + 1), weight):
        for letters in product("XYZ", repeat=weight):
            ops.append(pauli_from_sites(n, dict(zip(sites, letters))))
    return ops


def _single_site_ops(n: int, letters: str) -> list[PauliOperator]:
    return [single_site(n, site, letter) for letter in letters for site in range(1, n + 1)]


def _z_strings(n: int, order: int) -> list[PauliOperator]:
    return [pauli_from_sites(n, {s: "Z" for s in sites}) for sites in combinations(range(1, n + 1), order)]


def _make_family(n: int, ops: Iterable[PauliOperator], label: str, descriptor: dict) -> ErrorFamily:
    members = tuple(ops)
    seen = set()
    for op in members:
        if op.n != n:
            raise PauliError(f"Member {op.label} is not a {n}-qubit operator")
        if op.is_identity:
            raise PauliError("Error families may not contain the identity")
        if op.key in seen:
            raise PauliError(f"Duplicate family member {op.label}")
        seen.add(op.key)
    return ErrorFamily(n=n, members=members, label=label, descriptor=descriptor)


def build_family(
    kind: FamilyKind | str,
    n: int,
    d: Optional[int] = None,
    r: Optional[int] = None,
    letters: Optional[str] = None,
    members: Optional[Sequence[str | PauliOperator]] = None,
    label: Optional[str] = None,
) -> ErrorFamily:
    """
    Construct an error family in canonical order.

    Single-site operators come first (X on every site, then Y, then Z),
    followed by multi-body groups in lexicographic site order.

    Args:
        kind: weight_bounded(n, d), asym(n, r), mix(n), single_site(n, letters)
            or explicit(members)
        n: Qubit count
        d: Distance for weight_bounded (members have weight 1..d-1)
        r: Maximal Z-string body order for asym
        letters: Pauli letters for single_site
        members: Pauli labels or operators for explicit
        label: Optional override of the family label

    Returns:
        ErrorFamily: The constructed family
    """
    kind = FamilyKind(kind)
    if n < 1:
        raise PauliError(f"Qubit count must be positive, got {n}")

    if kind is FamilyKind.WEIGHT_BOUNDED:
        if d is None or d < 2 or d - 1 > n:
            raise PauliError(f"weight_bounded needs 2 <= d <= n+1, got d={d}")
        ops = _single_site_ops(n, "XYZ")
        for weight in range(2, d):
            ops.extend(_all_strings(n, weight))
        return _make_family(n, ops, label or f"weight_bounded({n},{d})",
                            {"kind": kind.value, "n": n, "d": d})

    if kind is FamilyKind.ASYM:
        if n < 2 or r is None or not 2 <= r <= n:
            raise PauliError(f"asym needs n >= 2 and 2 <= r <= n, got n={n}, r={r}")
        ops = _single_site_ops(n, "XYZ")
        for order in range(2, r + 1):
            ops.extend(_z_strings(n, order))
        return _make_family(n, ops, label or f"asym({n},{r})", {"kind": kind.value, "n": n, "r": r})

    if kind is FamilyKind.MIX:
        if n < 2:
            raise PauliError(f"mix needs n >= 2, got {n}")
        ops = _single_site_ops(n, "XYZ")
        for i, j in combinations(range(1, n + 1), 2):
            for a, b in (("X", "X"), ("Z", "Z"), ("X", "Z"), ("Z", "X")):
                ops.append(pauli_from_sites(n, {i: a, j: b}))
        return _make_family(n, ops, label or f"mix({n})", {"kind": kind.value, "n": n})

    if kind is FamilyKind.SINGLE_SITE:
        if not letters or any(ch not in "XYZ" for ch in letters):
            raise PauliError(f"single_site needs letters over XYZ, got {letters!r}")
        return _make_family(n, _single_site_ops(n, letters), label or f"single_site({n},{letters})",
                            {"kind": kind.value, "n": n, "letters": letters})

    if members is None:
        raise PauliError("explicit family needs a member list")
    ops = [m if isinstance(m, PauliOperator) else parse_pauli(m) for m in members]
    return _make_family(n, ops, label or "explicit",
                        {"kind": kind.value, "n": n, "members": [op.label for op in ops]})


def family_from_labels(labels: Sequence[str], label: Optional[str] = None) -> ErrorFamily:
    """Explicit family from Pauli labels; n is taken from the first label."""
    if not labels:
        raise PauliError("Explicit family needs at least one member")
    n = parse_pauli(labels[0]).n
    return build_family(FamilyKind.EXPLICIT, n, members=list(labels), label=label)


def index_to_pauli(n: int, index: int) -> PauliOperator:
    """Decode a base-4 index (I=0, X=1, Y=2, Z=3; qubit 1 most significant)."""
    digits = []
    for _ in range(n):
        digits.append("IXYZ"[index % 4])
        index //= 4
    return parse_pauli("".join(reversed(digits)))


def sample_tuple(n: int, m: int, seed: int) -> ErrorFamily:
    """
    Draw m distinct non-identity Pauli strings uniformly without replacement.

    Sampling uses the counter-based Philox generator so tuples are identical
    across platforms for a given seed.
    """
    total = 4 ** n - 1
    if not 1 <= m <= total:
        raise PauliError(f"Cannot draw {m} distinct non-identity strings on {n} qubits")
    rng = np.random.Generator(np.random.Philox(seed))
    indices = rng.choice(total, size=m, replace=False) + 1
    ops = [index_to_pauli(n, int(i)) for i in indices]
    return _make_family(n, ops, f"sample(n={n},m={m},seed={seed})",
                        {"kind": FamilyKind.EXPLICIT.value, "n": n, "members": [op.label for op in ops]})
