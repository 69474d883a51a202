"""Password change phase of Wang et al.'s dynamic-ID scheme.

The card holds N = H(PW) xor H(x_s) and the change phase rewrites it as
N xor H(PW_old) xor H(PW_new) without checking PW_old.
"""

from __future__ import annotations

from dataclasses import dataclass

from .netsim import Action, Transcript, Verdict
from .primitives import Bitstring, H


@dataclass(frozen=True)
class WangServer:
    x_s: Bitstring

    def __repr__(self):
        return "WangServer(<secret>)"


@dataclass(frozen=True)
class WangCard:
    n: Bitstring


def new_server(rng, width: int = 256) -> WangServer:
    return WangServer(Bitstring.random(rng, width))


def register(pw: bytes, server: WangServer) -> WangCard:
    L = server.x_s.width
    return WangCard(H(pw, L) ^ H(server.x_s, L))


def change_password(card: WangCard, old_pw: bytes, new_pw: bytes) -> WangCard:
    L = card.n.width
    return WangCard(card.n ^ H(old_pw, L) ^ H(new_pw, L))


def auth_check(card: WangCard, pw: bytes, server: WangServer) -> bool:
    L = card.n.width
    return card.n ^ H(pw, L) == H(server.x_s, L)


def dos_attack(card: WangCard, pw_prime: bytes, pw_double_prime: bytes) -> WangCard:
    return change_password(card, pw_prime, pw_double_prime)


def run_honest(transcript: Transcript, rng, width: int = 256) -> dict:
    server = new_server(rng, width)
    pw, new_pw = b"pw-" + rng.randbytes(8), b"pw-" + rng.randbytes(8)
    card = register(pw, server)
    transcript.log("S", Action.COMPUTE, op="register", n=card.n)
    ok_before = auth_check(card, pw, server)
    card = change_password(card, pw, new_pw)
    transcript.log("C", Action.COMPUTE, op="change-password", n=card.n)
    ok_new = auth_check(card, new_pw, server)
    ok_old = auth_check(card, pw, server)
    transcript.log("S", Action.COMPUTE, op="auth-check", before=ok_before,
                   new_pw=ok_new, old_pw=ok_old)
    success = ok_before and ok_new and not ok_old
    transcript.conclude(Verdict.HONEST_SUCCESS if success else Verdict.HONEST_FAILURE)
    return {"auth_before": ok_before, "auth_new": ok_new, "auth_old": ok_old}


def run_dos(transcript: Transcript, rng, width: int = 256) -> dict:
    server = new_server(rng, width)
    pw = b"pw-" + rng.randbytes(8)
    card = register(pw, server)
    transcript.log("S", Action.COMPUTE, op="register", n=card.n)
    pre = auth_check(card, pw, server)
    pw1, pw2 = b"guess-" + rng.randbytes(8), b"guess-" + rng.randbytes(8)
    while pw2 == pw1:
        pw2 = b"guess-" + rng.randbytes(8)
    before = card
    card = dos_attack(card, pw1, pw2)
    # the phase has no rejection path; "accepted" means the card was rewritten
    accepted = card != before
    transcript.log("adversary", Action.COMPUTE, op="change-password", old=pw1, new=pw2,
                   accepted=accepted, n=card.n)
    post = auth_check(card, pw, server)
    transcript.log("S", Action.COMPUTE, op="auth-check", before=pre, after=post)
    success = pre and accepted and not post
    transcript.conclude(Verdict.ATTACK_SUCCESS if success else Verdict.ATTACK_FAILURE)
    return {"auth_before": pre, "change_accepted": accepted, "auth_after": post}
