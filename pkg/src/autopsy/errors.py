"""Exception types shared across the package."""


class NotInvertible(ArithmeticError):
    """Raised by mod_inverse when gcd(a, m) != 1."""

    def __init__(self, a, m, gcd):
        super().__init__(f"{a} is not invertible mod {m} (gcd={gcd})")
        self.a = a
        self.m = m
        self.gcd = gcd


class OracleRefused(ValueError):
    """A brute-force oracle was asked to scan beyond its size guard."""


class IntegrityError(Exception):
    """Ciphertext tag did not verify under the supplied key."""


class Reject(Exception):
    """A protocol party refused a message.

    ``reason`` is one of a small fixed vocabulary (``bad-key``, ``stale``,
    ``forged``, ``server-unauthenticated``, ``id-mismatch``).
    """

    def __init__(self, reason, detail=""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
