"""Smart-card password authentication with a DH session key (Bindu et al.),
and the lost-card insider impersonation attack against it.

Card values, for server secret s:

    m = H(ID xor s) xor H(s) xor H(PW)
    I = H(ID xor s) xor s

The server keeps no verifier table; it recovers R = U xor H(s) xor s from
the login message. Any registered user can compute V = m xor I xor H(PW)
= H(s) xor s from their own card, which is all that is needed to build a
valid U for somebody else's card.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IntegrityError, Reject
from .netsim import Action, Adversary, Clock, Network, SealedSecret, Transcript, Verdict
from .numtheory import DhParams, mod_exp
from .primitives import (
    Bitstring, CipherText, H, decode_element, decrypt, encode_element, encrypt,
    int_bytes, pack_fields, unpack_fields,
)


@dataclass(frozen=True)
class BinduServer:
    s: Bitstring
    params: DhParams

    def __repr__(self):
        # keep s out of logs and tracebacks
        return f"BinduServer(params={self.params!r})"

    @property
    def width(self) -> int:
        return self.s.width


@dataclass(frozen=True)
class BinduCard:
    m: Bitstring
    i: Bitstring


@dataclass(frozen=True)
class BinduLoginRequest:
    u: Bitstring
    t: int
    ct1: CipherText


@dataclass(frozen=True)
class BinduChallenge:
    t_s: int
    ct2: CipherText


@dataclass(frozen=True)
class BinduProof:
    ct3: CipherText


@dataclass(frozen=True)
class BinduClientState:
    x: int
    r_i: int
    r_bits: Bitstring
    r_key: Bitstring
    id: bytes


@dataclass(frozen=True)
class BinduServerSession:
    id: bytes
    r_i: int
    y: int
    r_s: int
    r_key: Bitstring
    k_us: Bitstring


def new_server(params: DhParams, rng, width: int = 256) -> BinduServer:
    if params.p.bit_length() > width:
        raise ValueError("hash width must cover the modulus")
    return BinduServer(Bitstring.random(rng, width), params)


def _pad(data: bytes, width: int) -> Bitstring:
    return Bitstring.from_bytes(data, width)


def register(id: bytes, pw: bytes, server: BinduServer) -> BinduCard:
    L = server.width
    h_id = H(_pad(id, L) ^ server.s, L)
    return BinduCard(m=h_id ^ H(server.s, L) ^ H(pw, L), i=h_id ^ server.s)


def _build_request(card_i: Bitstring, big_m: Bitstring, id: bytes, params: DhParams,
                   clock: Clock, rng):
    x = rng.randint(1, params.p - 2)
    r = mod_exp(params.g, x, params.p)
    r_bits = encode_element(r, params.p, card_i.width)
    u = big_m ^ r_bits
    r_key = card_i ^ r_bits
    t = clock.now
    ct1 = encrypt(r_key, pack_fields(int_bytes(r), id, int_bytes(t)))
    return BinduLoginRequest(u, t, ct1), BinduClientState(x, r, r_bits, r_key, id)


def login_request(card: BinduCard, id: bytes, pw: bytes, params: DhParams,
                  clock: Clock, rng):
    """Honest client: M = m xor H(PW), U = M xor r, R = I xor r."""
    big_m = card.m ^ H(pw, card.m.width)
    return _build_request(card.i, big_m, id, params, clock, rng)


def insider_forge_login(victim_card: BinduCard, own_card: BinduCard, own_pw: bytes,
                        victim_id: bytes, params: DhParams, clock: Clock, rng):
    """Build a login request for ``victim_id`` from the attacker's own card.

    V = m_e xor I_e xor H(PW_e) equals H(s) xor s, and M = I_c xor V equals
    the victim's m_c xor H(PW_c). The victim's password is never needed.
    """
    v = own_card.m ^ own_card.i ^ H(own_pw, own_card.m.width)
    big_m = victim_card.i ^ v
    return _build_request(victim_card.i, big_m, victim_id, params, clock, rng)


def server_recover_r(req: BinduLoginRequest, server: BinduServer) -> Bitstring:
    """R' = U xor H(s) xor s."""
    return req.u ^ H(server.s, server.width) ^ server.s


def server_verify_login(req: BinduLoginRequest, server: BinduServer, clock: Clock, rng):
    p, g, L = server.params.p, server.params.g, server.width
    r_key = server_recover_r(req, server)
    try:
        fields = unpack_fields(decrypt(r_key, req.ct1))
    except IntegrityError:
        raise Reject("bad-key", "login ciphertext") from None
    if not clock.is_fresh(req.t):
        raise Reject("stale", f"now={clock.now} T={req.t}")
    if len(fields) != 3:
        raise Reject("forged", "malformed login payload")
    r_i, id = int.from_bytes(fields[0], "big"), fields[1]
    if r_i >= p:
        raise Reject("forged", "r_i out of range")
    expected = H(_pad(id, L) ^ server.s, L) ^ server.s ^ encode_element(r_i, p, L)
    if expected != r_key:
        raise Reject("forged", "R mismatch")
    y = rng.randint(1, p - 2)
    r_s = mod_exp(g, y, p)
    t_s = clock.now
    ct2 = encrypt(r_key, pack_fields(int_bytes(r_s), int_bytes((r_i + 1) % p), int_bytes(t_s)))
    k_us = H(encode_element(mod_exp(r_i, y, p), p, L), L)
    return BinduChallenge(t_s, ct2), BinduServerSession(id, r_i, y, r_s, r_key, k_us)


def client_verify_challenge(state: BinduClientState, challenge: BinduChallenge,
                            params: DhParams, clock: Clock):
    p, L = params.p, state.r_key.width
    if not clock.is_fresh(challenge.t_s):
        raise Reject("stale", f"now={clock.now} T_s={challenge.t_s}")
    try:
        fields = unpack_fields(decrypt(state.r_key, challenge.ct2))
    except IntegrityError:
        raise Reject("bad-key", "challenge ciphertext") from None
    if len(fields) != 3:
        raise Reject("server-unauthenticated", "malformed challenge")
    r_s, echo = (int.from_bytes(f, "big") for f in fields[:2])
    if echo != (state.r_i + 1) % p or r_s >= p:
        raise Reject("server-unauthenticated", "r_i + 1 check failed")
    k_us = H(encode_element(mod_exp(r_s, state.x, p), p, L), L)
    return BinduProof(encrypt(k_us, pack_fields(int_bytes((r_s + 1) % p)))), k_us


def server_verify_proof(session: BinduServerSession, proof: BinduProof, params: DhParams) -> bool:
    try:
        fields = unpack_fields(decrypt(session.k_us, proof.ct3))
    except IntegrityError:
        raise Reject("bad-key", "proof ciphertext") from None
    if len(fields) != 1 or int.from_bytes(fields[0], "big") != (session.r_s + 1) % params.p:
        raise Reject("forged", "r_s + 1 check failed")
    return True


# -- scenarios ---------------------------------------------------------------

def run_honest(transcript: Transcript, params: DhParams, rng, clock: Clock,
               width: int = 256) -> dict:
    server = new_server(params, rng, width)
    cid, cpw = b"client-C", b"pw-" + rng.randbytes(8)
    card = register(cid, cpw, server)
    transcript.log("S", Action.COMPUTE, op="register", id=cid, m=card.m, i=card.i)
    net = Network(clock, transcript)
    try:
        req, cstate = login_request(card, cid, cpw, params, clock, rng)
        transcript.log("C", Action.COMPUTE, op="login", r_i=cstate.r_i)
        net.send("C", "S", req)
        challenge, session = server_verify_login(net.deliver("S").payload, server, clock, rng)
        transcript.log("S", Action.COMPUTE, op="verify-login", result="accept", r_s=session.r_s)
        net.send("S", "C", challenge)
        proof, k_client = client_verify_challenge(cstate, net.deliver("C").payload, params, clock)
        transcript.log("C", Action.COMPUTE, op="verify-challenge", result="accept")
        net.send("C", "S", proof)
        server_verify_proof(session, net.deliver("S").payload, params)
        transcript.log("S", Action.COMPUTE, op="verify-proof", result="accept")
    except Reject as exc:
        transcript.conclude(Verdict.HONEST_FAILURE, reason=exc.reason)
        return {"keys_equal": False}
    keys_equal = k_client == session.k_us
    transcript.conclude(Verdict.HONEST_SUCCESS if keys_equal else Verdict.HONEST_FAILURE,
                        keys_equal=keys_equal)
    return {"keys_equal": keys_equal}


class InsiderAdversary(Adversary):
    """Registered user E holding C's lost card.

    Knows: its own card and password, C's card, C's identity. Intercepts
    every server message addressed to C.
    """

    name = "E"

    def __init__(self, own_card: BinduCard, own_pw: bytes, victim_card: BinduCard,
                 victim_id: bytes, params: DhParams):
        self.own_card = own_card
        self.own_pw = own_pw
        self.victim_card = victim_card
        self.victim_id = victim_id
        self.params = params
        self.captured = []
        self.state = None

    def on_send(self, net, msg):
        if msg.sender == "S" and msg.receiver == "C":
            self.captured.append(net.intercept(msg.msg_id))

    def forge(self, net: Network, rng) -> None:
        req, self.state = insider_forge_login(self.victim_card, self.own_card, self.own_pw,
                                              self.victim_id, self.params, net.clock, rng)
        net.transcript.log(self.name, Action.COMPUTE, op="forge-login", r_c=self.state.r_i)
        net.inject("S", req, claimed_sender="C")

    def answer(self, net: Network) -> bytes:
        proof, k_us = client_verify_challenge(self.state, self.captured.pop(0),
                                              self.params, net.clock)
        net.transcript.log(self.name, Action.COMPUTE, op="derive-session-key")
        net.inject("S", proof, claimed_sender="C")
        return k_us


def run_insider(transcript: Transcript, params: DhParams, rng, clock: Clock,
                width: int = 256) -> dict:
    server = new_server(params, rng, width)
    victim_id, attacker_id = b"client-C", b"insider-E"
    victim_pw = SealedSecret(b"pw-" + rng.randbytes(8))
    attacker_pw = b"pw-" + rng.randbytes(8)
    victim_card = register(victim_id, victim_pw.reveal(), server)
    own_card = register(attacker_id, attacker_pw, server)
    transcript.log("S", Action.COMPUTE, op="register", id=victim_id)
    transcript.log("S", Action.COMPUTE, op="register", id=attacker_id)
    reads_before = victim_pw.reads
    victim_pw.seal()
    transcript.log("E", Action.COMPUTE, op="obtain-lost-card", victim=victim_id,
                   m=victim_card.m, i=victim_card.i)

    adversary = InsiderAdversary(own_card, attacker_pw, victim_card, victim_id, params)
    net = Network(clock, transcript, adversary)
    try:
        adversary.forge(net, rng)
        challenge, session = server_verify_login(net.deliver("S").payload, server, clock, rng)
        transcript.log("S", Action.COMPUTE, op="verify-login", result="accept", peer=session.id)
        net.send("S", "C", challenge)
        k_attacker = adversary.answer(net)
        server_verify_proof(session, net.deliver("S").payload, params)
        transcript.log("S", Action.COMPUTE, op="verify-proof", result="accept", peer=session.id)
    except Reject as exc:
        transcript.conclude(Verdict.ATTACK_FAILURE, reason=exc.reason)
        return {"victim_pw_reads_during_attack": victim_pw.reads - reads_before,
                "authenticated_as_victim": False}
    as_victim = session.id == victim_id and k_attacker == session.k_us
    transcript.conclude(Verdict.ATTACK_SUCCESS if as_victim else Verdict.ATTACK_FAILURE,
                        authenticated_as=session.id)
    return {"victim_pw_reads_during_attack": victim_pw.reads - reads_before,
            "authenticated_as_victim": as_victim}
