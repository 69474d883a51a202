"""Password change phase of Goriparthi et al.'s pairing-based scheme.

G1 is modeled as Z_n under addition and h() as map_to_group. The card
stores Reg_ID = s*h(ID) + h(PW). Changing the password only checks the
entered ID, so anyone holding the card can swap in h(PW'') - h(PW') and
lock the owner out.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import Reject
from .netsim import Action, Transcript, Verdict
from .primitives import DEFAULT_GROUP, AdditiveGroupParams, map_to_group


@dataclass(frozen=True)
class GoriServer:
    s: int
    params: AdditiveGroupParams = DEFAULT_GROUP

    def __post_init__(self):
        if not 1 <= self.s <= self.params.n - 1:
            raise ValueError("server secret out of range")

    def __repr__(self):
        return f"GoriServer(params={self.params!r})"


@dataclass(frozen=True)
class GoriCard:
    id: bytes
    reg: int
    params: AdditiveGroupParams = DEFAULT_GROUP


def new_server(rng, params: AdditiveGroupParams = DEFAULT_GROUP) -> GoriServer:
    return GoriServer(rng.randint(1, params.n - 1), params)


def register(id: bytes, pw: bytes, server: GoriServer) -> GoriCard:
    n = server.params.n
    h = lambda data: map_to_group(data, server.params)  # noqa: E731
    return GoriCard(id, (server.s * h(id) + h(pw)) % n, server.params)


def change_password(card: GoriCard, entered_id: bytes, entered_old_pw: bytes,
                    new_pw: bytes) -> GoriCard:
    """Card-local update. The old password is deliberately not validated."""
    if entered_id != card.id:
        raise Reject("id-mismatch")
    n = card.params.n
    reg = (card.reg - map_to_group(entered_old_pw, card.params)
           + map_to_group(new_pw, card.params)) % n
    return replace(card, reg=reg)


def auth_check(card: GoriCard, pw: bytes, server: GoriServer) -> bool:
    """Minimal server-side relation: Reg_ID - h(PW) == s*h(ID)."""
    n = server.params.n
    lhs = (card.reg - map_to_group(pw, server.params)) % n
    return lhs == server.s * map_to_group(card.id, server.params) % n


def dos_attack(card: GoriCard, pw_prime: bytes, pw_double_prime: bytes) -> GoriCard:
    return change_password(card, card.id, pw_prime, pw_double_prime)


def run_honest(transcript: Transcript, rng) -> dict:
    server = new_server(rng)
    cid, pw, new_pw = b"client-C", b"pw-" + rng.randbytes(8), b"pw-" + rng.randbytes(8)
    card = register(cid, pw, server)
    transcript.log("S", Action.COMPUTE, op="register", id=cid, reg=card.reg)
    ok_before = auth_check(card, pw, server)
    card = change_password(card, cid, pw, new_pw)
    transcript.log("C", Action.COMPUTE, op="change-password", reg=card.reg)
    ok_new = auth_check(card, new_pw, server)
    ok_old = auth_check(card, pw, server)
    transcript.log("S", Action.COMPUTE, op="auth-check", before=ok_before,
                   new_pw=ok_new, old_pw=ok_old)
    success = ok_before and ok_new and not ok_old
    transcript.conclude(Verdict.HONEST_SUCCESS if success else Verdict.HONEST_FAILURE)
    return {"auth_before": ok_before, "auth_new": ok_new, "auth_old": ok_old}


def run_dos(transcript: Transcript, rng) -> dict:
    server = new_server(rng)
    cid, pw = b"client-C", b"pw-" + rng.randbytes(8)
    card = register(cid, pw, server)
    transcript.log("S", Action.COMPUTE, op="register", id=cid, reg=card.reg)
    pre = auth_check(card, pw, server)
    pw1, pw2 = b"guess-" + rng.randbytes(8), b"guess-" + rng.randbytes(8)
    while pw2 == pw1:
        pw2 = b"guess-" + rng.randbytes(8)
    try:
        card = dos_attack(card, pw1, pw2)
        accepted = True
    except Reject:
        accepted = False
    transcript.log("adversary", Action.COMPUTE, op="change-password", old=pw1, new=pw2,
                   accepted=accepted, reg=card.reg)
    post = auth_check(card, pw, server)
    transcript.log("S", Action.COMPUTE, op="auth-check", before=pre, after=post)
    success = pre and accepted and not post
    transcript.conclude(Verdict.ATTACK_SUCCESS if success else Verdict.ATTACK_FAILURE)
    return {"auth_before": pre, "change_accepted": accepted, "auth_after": post}
