"""Identity-based two-party key agreement (Hölbl et al., both variants) and
the insider attempt to recover the KGC secret from one's own private key.

Key extraction, exponents mod p-1:

    variant 1:  v = I*k + x_s*u          I = H(ID), u = g^k
    variant 2:  v = k + x_s*H(ID, u)

The attack takes one congruence in two unknowns (k, x_s) and picks a
solution with extended Euclid. Any solution satisfies the congruence; only
the public checks g^x == y_s and g^k == u say whether it is the *right*
one. This module never assumes success: it reports what those checks and
the brute-force ground truth say.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import NotInvertible, OracleRefused
from .netsim import Action, Network, Transcript, Verdict
from .numtheory import DhParams, ext_gcd, mod_exp, mod_inverse
from .primitives import DEFAULT_WIDTH, encode_element, hash_bits, pack_fields

ORACLE_GUARD = 1 << 16


@dataclass(frozen=True)
class KgcPublic:
    params: DhParams
    y_s: int
    width: int = DEFAULT_WIDTH


@dataclass
class HolblKgc:
    params: DhParams
    x_s: int
    y_s: int
    width: int = DEFAULT_WIDTH
    # test-only handle: id -> k chosen at extraction
    issued_k: dict = field(default_factory=dict, repr=False)

    def __repr__(self):
        return f"HolblKgc(params={self.params!r}, y_s={self.y_s})"

    @property
    def public(self) -> KgcPublic:
        return KgcPublic(self.params, self.y_s, self.width)


@dataclass(frozen=True)
class HolblUserKeys:
    id: bytes
    u: int
    v: int
    variant: int


@dataclass(frozen=True)
class HolblHello:
    id: bytes
    u: int
    t: int


@dataclass(frozen=True)
class RecoveryTrace:
    variant: int
    multiplier: int  # coefficient of x_s: u_c (variant 1) or H(ID_c, u_c) (variant 2)
    q: int
    w: int
    z: int
    alpha: int
    beta: int
    j: Optional[int]
    candidate_x: Optional[int]
    candidate_k: Optional[int]
    applicable: bool


@dataclass(frozen=True)
class SecondStageTrace:
    q_i: int
    w_i: int
    z_i: int
    gamma: int
    epsilon: int
    j_i: Optional[int]
    candidate_v: Optional[int]
    applicable: bool


@dataclass(frozen=True)
class RecoveryVerdict:
    x_matches: bool
    k_matches: bool

    @property
    def full(self) -> bool:
        return self.x_matches and self.k_matches


@dataclass(frozen=True)
class OracleResult:
    true_x: Optional[int]
    true_k: Optional[int]
    candidate_count: int


@dataclass(frozen=True)
class ImpersonationResult:
    keys_match: bool
    attacker_key: int
    peer_key: int


def hash_to_exponent(data: bytes, p: int) -> int:
    """Digest reduced mod p-1, re-hashed with a counter suffix while zero."""
    m = p - 1
    e = hash_bits(data).value % m
    counter = 0
    while e == 0:
        counter += 1
        e = hash_bits(data + counter.to_bytes(4, "big")).value % m
    return e


def identity_exponent(id: bytes, p: int) -> int:
    return hash_to_exponent(id, p)


def pair_exponent(id: bytes, u: int, p: int, width: int = DEFAULT_WIDTH) -> int:
    """H(ID, u) over the length-prefixed ID || encode(u)."""
    return hash_to_exponent(pack_fields(id, bytes(encode_element(u, p, width))), p)


def key_multiplier(id: bytes, u: int, kgc: KgcPublic, variant: int) -> int:
    """Coefficient of x_s in the key equation (u for variant 1, H(ID,u) for 2)."""
    if variant == 1:
        return u
    if variant == 2:
        return pair_exponent(id, u, kgc.params.p, kgc.width)
    raise ValueError(f"unknown variant {variant}")


def key_coefficient(id: bytes, p: int, variant: int) -> int:
    """Coefficient of k in the key equation (I for variant 1, 1 for 2)."""
    return identity_exponent(id, p) if variant == 1 else 1


def setup(params: DhParams, rng, width: int = DEFAULT_WIDTH) -> HolblKgc:
    x_s = rng.randint(1, params.p - 2)
    return HolblKgc(params, x_s, mod_exp(params.g, x_s, params.p), width)


def extract(kgc: HolblKgc, id: bytes, variant: int, rng) -> HolblUserKeys:
    p, g = kgc.params.p, kgc.params.g
    k = rng.randint(1, p - 2)
    u = mod_exp(g, k, p)
    a = key_coefficient(id, p, variant)
    b = key_multiplier(id, u, kgc.public, variant)
    kgc.issued_k[id] = k
    return HolblUserKeys(id, u, (a * k + kgc.x_s * b) % (p - 1), variant)


def public_key_value(id: bytes, u: int, kgc: KgcPublic, variant: int) -> int:
    """g^v computed from public values only: u^I * y_s^u, or u * y_s^H(ID,u)."""
    p = kgc.params.p
    base = mod_exp(u, key_coefficient(id, p, variant), p)
    return base * mod_exp(kgc.y_s, key_multiplier(id, u, kgc, variant), p) % p


def check_public_relation(v: int, id: bytes, u: int, kgc: KgcPublic, variant: int) -> bool:
    return mod_exp(kgc.params.g, v, kgc.params.p) == public_key_value(id, u, kgc, variant)


def ephemeral(params: DhParams, rng) -> tuple[int, int]:
    r = rng.randint(1, params.p - 2)
    return r, mod_exp(params.g, r, params.p)


def agree(own: HolblUserKeys, r: int, peer: HolblHello, kgc: KgcPublic, variant: int) -> int:
    """K = (g^{v_peer} * t_peer)^{(v_own + r) mod (p-1)}."""
    p = kgc.params.p
    base = public_key_value(peer.id, peer.u, kgc, variant) * peer.t % p
    return mod_exp(base, (own.v + r) % (p - 1), p)


def insider_recover(own: HolblUserKeys, kgc: KgcPublic, variant: int) -> RecoveryTrace:
    m = kgc.params.p - 1
    if variant == 1:
        i_c = identity_exponent(own.id, kgc.params.p)
        q = ext_gcd(i_c, own.u).g
        w, z = i_c // q, own.u // q
        _, alpha, beta = ext_gcd(w, z)
        if own.v % q:
            # the procedure needs j = v_c / q as an integer
            return RecoveryTrace(1, own.u, q, w, z, alpha, beta, None, None, None, False)
        j = own.v // q
        return RecoveryTrace(1, own.u, q, w, z, alpha, beta, j,
                             beta * j % m, alpha * j % m, True)
    if variant == 2:
        h = key_multiplier(own.id, own.u, kgc, 2)
        _, alpha, beta = ext_gcd(1, h)
        return RecoveryTrace(2, h, 1, 1, h, alpha, beta, own.v,
                             beta * own.v % m, alpha * own.v % m, True)
    raise ValueError(f"unknown variant {variant}")


def trace_congruence_holds(trace: RecoveryTrace, own: HolblUserKeys, kgc: KgcPublic) -> bool:
    """Candidates reproduce v_c through the key equation (mod p-1)."""
    if not trace.applicable:
        return True
    m = kgc.params.p - 1
    if trace.alpha * trace.w + trace.beta * trace.z != 1:
        return False
    a = key_coefficient(own.id, kgc.params.p, trace.variant)
    b = key_multiplier(own.id, own.u, kgc, trace.variant)
    return (a * trace.candidate_k + b * trace.candidate_x) % m == own.v % m


def verify_recovery(trace: RecoveryTrace, kgc: KgcPublic, own_u: int) -> RecoveryVerdict:
    if not trace.applicable:
        raise ValueError("trace is not applicable")
    p, g = kgc.params.p, kgc.params.g
    return RecoveryVerdict(mod_exp(g, trace.candidate_x, p) == kgc.y_s,
                           mod_exp(g, trace.candidate_k, p) == own_u % p)


def bruteforce_key_oracle(kgc: KgcPublic, own: HolblUserKeys, variant: int) -> OracleResult:
    """Ground truth for small p.

    Counts every (k, x) in [0, p-1)^2 with a*k + b*x == v (mod p-1) and
    keeps the ones with g^k == u and g^x == y_s.
    """
    p, g = kgc.params.p, kgc.params.g
    if p > ORACLE_GUARD:
        raise OracleRefused(f"p={p} exceeds oracle guard {ORACLE_GUARD}")
    m = p - 1
    a = key_coefficient(own.id, p, variant)
    b = key_multiplier(own.id, own.u, kgc, variant)
    table = [1] * m
    for e in range(1, m):
        table[e] = table[e - 1] * g % p
    d, b_alpha, _ = ext_gcd(b % m, m) if b % m else (m, 0, 0)
    step = m // d
    count = 0
    true_k = true_x = None
    for k in range(m):
        rhs = (own.v - a * k) % m
        if rhs % d:
            continue
        count += d
        if table[k] != own.u:
            continue
        x0 = b_alpha * (rhs // d) % step if b % m else 0
        for x in range(x0, m, step):
            if table[x] == kgc.y_s:
                true_k, true_x = k, x
    return OracleResult(true_x, true_k, count)


def derive_other_user_key(x_candidate: int, target_id: bytes, target_u: int,
                          kgc: KgcPublic) -> SecondStageTrace:
    """Second stage, variant 1, implemented exactly as written:
    j_i = x / epsilon and v_i = j_i * q_i, with modular division."""
    p = kgc.params.p
    m = p - 1
    i_i = identity_exponent(target_id, p)
    q_i = ext_gcd(i_i, target_u).g
    w_i, z_i = i_i // q_i, target_u // q_i
    _, gamma, epsilon = ext_gcd(w_i, z_i)
    try:
        j_i = x_candidate * mod_inverse(epsilon % m, m) % m
    except NotInvertible:
        return SecondStageTrace(q_i, w_i, z_i, gamma, epsilon, None, None, False)
    return SecondStageTrace(q_i, w_i, z_i, gamma, epsilon, j_i, j_i * q_i % m, True)


def impersonate(candidate_v: int, target_id: bytes, target_u: int, peer: HolblUserKeys,
                kgc: KgcPublic, variant: int, rng) -> ImpersonationResult:
    """Run one key agreement as the target (private key ``candidate_v``)
    against an honest peer that trusts the target's published u."""
    fake = HolblUserKeys(target_id, target_u, candidate_v, variant)
    r_att, t_att = ephemeral(kgc.params, rng)
    r_peer, t_peer = ephemeral(kgc.params, rng)
    k_att = agree(fake, r_att, HolblHello(peer.id, peer.u, t_peer), kgc, variant)
    k_peer = agree(peer, r_peer, HolblHello(target_id, target_u, t_att), kgc, variant)
    return ImpersonationResult(k_att == k_peer, k_att, k_peer)


# -- scenarios ---------------------------------------------------------------

def run_honest(transcript: Transcript, params: DhParams, rng, clock, variant: int,
               width: int = DEFAULT_WIDTH) -> dict:
    kgc = setup(params, rng, width)
    pub = kgc.public
    transcript.log("KGC", Action.COMPUTE, op="setup", p=params.p, g=params.g, y_s=kgc.y_s)
    a = extract(kgc, b"user-A", variant, rng)
    b = extract(kgc, b"user-B", variant, rng)
    transcript.log("KGC", Action.COMPUTE, op="extract", id=a.id, u=a.u)
    transcript.log("KGC", Action.COMPUTE, op="extract", id=b.id, u=b.u)
    net = Network(clock, transcript)
    r_a, t_a = ephemeral(params, rng)
    net.send("A", "B", HolblHello(a.id, a.u, t_a))
    hello_a = net.deliver("B").payload
    r_b, t_b = ephemeral(params, rng)
    net.send("B", "A", HolblHello(b.id, b.u, t_b))
    hello_b = net.deliver("A").payload
    k_ab = agree(a, r_a, hello_b, pub, variant)
    k_ba = agree(b, r_b, hello_a, pub, variant)
    equal = k_ab == k_ba
    transcript.log("A", Action.COMPUTE, op="session-key", k=k_ab)
    transcript.log("B", Action.COMPUTE, op="session-key", k=k_ba)
    transcript.conclude(Verdict.HONEST_SUCCESS if equal else Verdict.HONEST_FAILURE,
                        keys_equal=equal)
    return {"keys_equal": equal}


def run_recover(transcript: Transcript, params: DhParams, rng, clock, variant: int,
                width: int = DEFAULT_WIDTH) -> dict:
    kgc = setup(params, rng, width)
    pub = kgc.public
    own = extract(kgc, b"insider-C", variant, rng)
    transcript.log("KGC", Action.COMPUTE, op="extract", id=own.id, u=own.u)
    trace = insider_recover(own, pub, variant)
    congruence = trace_congruence_holds(trace, own, pub)
    transcript.log("C", Action.COMPUTE, op="recover", trace=trace, congruence=congruence)
    oracle = bruteforce_key_oracle(pub, own, variant)
    transcript.log("oracle", Action.COMPUTE, op="ground-truth", true_x=oracle.true_x,
                   true_k=oracle.true_k, candidate_count=oracle.candidate_count)
    metrics = {"applicable": trace.applicable, "congruence_ok": congruence,
               "oracle_matches_kgc": oracle.true_x == kgc.x_s,
               "candidate_count": oracle.candidate_count}
    if not trace.applicable:
        transcript.conclude(Verdict.INAPPLICABLE, consistent=True)
        return {**metrics, "consistent": True}
    verdict = verify_recovery(trace, pub, own.u)
    truth = (trace.candidate_x == oracle.true_x, trace.candidate_k == oracle.true_k)
    consistent = (verdict.x_matches, verdict.k_matches) == truth
    transcript.log("C", Action.COMPUTE, op="verify", x_matches=verdict.x_matches,
                   k_matches=verdict.k_matches)
    transcript.conclude(Verdict.ATTACK_SUCCESS if verdict.full else Verdict.ATTACK_FAILURE,
                        consistent=consistent)
    return {**metrics, "consistent": consistent, "x_matches": verdict.x_matches,
            "k_matches": verdict.k_matches}


def run_impersonate(transcript: Transcript, params: DhParams, rng, clock,
                    width: int = DEFAULT_WIDTH) -> dict:
    kgc = setup(params, rng, width)
    pub = kgc.public
    own = extract(kgc, b"insider-C", 1, rng)
    target = extract(kgc, b"user-i", 1, rng)
    peer = extract(kgc, b"user-B", 1, rng)
    for keys in (own, target, peer):
        transcript.log("KGC", Action.COMPUTE, op="extract", id=keys.id, u=keys.u)
    trace = insider_recover(own, pub, 1)
    transcript.log("C", Action.COMPUTE, op="recover", trace=trace)
    if not trace.applicable:
        transcript.conclude(Verdict.INAPPLICABLE, stage=1, consistent=True)
        return {"consistent": True, "applicable": False}
    second = derive_other_user_key(trace.candidate_x, target.id, target.u, pub)
    transcript.log("C", Action.COMPUTE, op="derive-other-key", trace=second)
    if not second.applicable:
        transcript.conclude(Verdict.INAPPLICABLE, stage=2, consistent=True)
        return {"consistent": True, "applicable": False}
    relation = check_public_relation(second.candidate_v, target.id, target.u, pub, 1)
    result = impersonate(second.candidate_v, target.id, target.u, peer, pub, 1, rng)
    consistent = result.keys_match == relation
    transcript.log("C", Action.COMPUTE, op="impersonate", keys_match=result.keys_match,
                   public_relation=relation)
    transcript.conclude(Verdict.ATTACK_SUCCESS if result.keys_match else Verdict.ATTACK_FAILURE,
                        consistent=consistent)
    return {"consistent": consistent, "applicable": True, "keys_match": result.keys_match,
            "public_relation": relation}
