"""Deterministic simulated insecure channel.

Honest parties exchange messages through a :class:`Network`. A scripted
adversary, if attached, is called on every honest send and may intercept
the message (removing it from the honest queue), inject its own, or replay
old payloads. Freshness is not the channel's business.
"""

from __future__ import annotations

import dataclasses
import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from .primitives import Bitstring, CipherText

DEFAULT_DELTA_T = 2


class Action(str, Enum):
    SEND = "send"
    DELIVER = "deliver"
    INTERCEPT = "intercept"
    INJECT = "inject"
    COMPUTE = "compute"
    VERDICT = "verdict"


class Verdict(str, Enum):
    HONEST_SUCCESS = "honest-success"
    HONEST_FAILURE = "honest-failure"
    ATTACK_SUCCESS = "attack-success"
    ATTACK_FAILURE = "attack-failure"
    INAPPLICABLE = "procedure-inapplicable"


@dataclass
class Clock:
    now: int = 0
    delta_t: int = DEFAULT_DELTA_T

    def __post_init__(self):
        if self.delta_t < 1:
            raise ValueError("delta_t must be >= 1")

    def advance(self, ticks: int = 1) -> None:
        if ticks < 0:
            raise ValueError("clock cannot run backwards")
        self.now += ticks

    def is_fresh(self, t: int) -> bool:
        return self.now - t < self.delta_t


def advance_clock(clock: Clock, ticks: int) -> None:
    clock.advance(ticks)


def hexify(value: Any) -> Any:
    """Render a value for a transcript: binary data as lowercase hex."""
    if isinstance(value, Bitstring):
        return value.hex()
    if isinstance(value, (bytes, bytearray)):
        return bytes(value).hex()
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return format(value, "x")
    if isinstance(value, CipherText):
        return {"body": value.body.hex(), "tag": value.tag.hex()}
    if isinstance(value, Enum):
        return value.value
    if dataclasses.is_dataclass(value):
        return {f.name: hexify(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {k: hexify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [hexify(v) for v in value]
    return value


@dataclass
class Event:
    step: int
    actor: str
    action: Action
    detail: dict

    def to_dict(self) -> dict:
        return {"step": self.step, "actor": self.actor,
                "action": self.action.value, "detail": self.detail}


@dataclass
class Transcript:
    scenario: str
    seed: int
    events: list = field(default_factory=list)
    verdict: Optional[Verdict] = None

    def log(self, actor: str, action: Action, **detail) -> Event:
        ev = Event(len(self.events), actor, Action(action),
                   {k: hexify(v) for k, v in detail.items()})
        self.events.append(ev)
        return ev

    def conclude(self, verdict: Verdict, **detail) -> None:
        if self.verdict is not None:
            raise RuntimeError("transcript already has a verdict")
        self.verdict = Verdict(verdict)
        self.log("harness", Action.VERDICT, verdict=self.verdict, **detail)

    def lines(self) -> list[str]:
        out = [json.dumps(ev.to_dict(), sort_keys=True) for ev in self.events]
        out.append(json.dumps({"scenario": self.scenario, "seed": self.seed,
                               "verdict": self.verdict.value if self.verdict else None},
                              sort_keys=True))
        return out

    def to_jsonl(self) -> str:
        return "\n".join(self.lines()) + "\n"


@dataclass
class Message:
    msg_id: int
    sender: str
    receiver: str
    payload: Any


class Adversary:
    """Base scripted adversary: passive (observes, does nothing)."""

    name = "adversary"

    def on_send(self, net: "Network", msg: Message) -> None:
        pass


class Network:
    """FIFO per-receiver channel with a shared clock and transcript.

    Each transmission (honest send or injection) advances the clock by
    one tick.
    """

    def __init__(self, clock: Clock, transcript: Transcript,
                 adversary: Optional[Adversary] = None):
        self.clock = clock
        self.transcript = transcript
        self.adversary = adversary
        self._queues: dict[str, deque] = {}
        self._pending: dict[int, Message] = {}
        self._next_id = 0
        self.closed = False

    def _enqueue(self, msg: Message) -> None:
        self._queues.setdefault(msg.receiver, deque()).append(msg.msg_id)
        self._pending[msg.msg_id] = msg

    def _new_message(self, sender, receiver, payload) -> Message:
        if self.closed:
            raise RuntimeError("channel closed")
        msg = Message(self._next_id, sender, receiver, payload)
        self._next_id += 1
        self.clock.advance(1)
        return msg

    def send(self, sender: str, receiver: str, payload: Any) -> int:
        msg = self._new_message(sender, receiver, payload)
        self.transcript.log(sender, Action.SEND, msg=msg.msg_id, to=receiver,
                            now=self.clock.now, payload=payload)
        self._enqueue(msg)
        if self.adversary is not None:
            self.adversary.on_send(self, msg)
        return msg.msg_id

    def intercept(self, msg_id: int) -> Any:
        msg = self._pending.pop(msg_id, None)
        if msg is None:
            raise ValueError(f"no pending message with id {msg_id}")
        self._queues[msg.receiver].remove(msg_id)
        actor = self.adversary.name if self.adversary else "adversary"
        self.transcript.log(actor, Action.INTERCEPT, msg=msg_id, to=msg.receiver)
        return msg.payload

    def inject(self, receiver: str, payload: Any, claimed_sender: str = "?") -> int:
        msg = self._new_message(claimed_sender, receiver, payload)
        actor = self.adversary.name if self.adversary else "adversary"
        self.transcript.log(actor, Action.INJECT, msg=msg.msg_id, to=receiver,
                            claimed_sender=claimed_sender, now=self.clock.now, payload=payload)
        self._enqueue(msg)
        return msg.msg_id

    def pending(self, receiver: str) -> int:
        return len(self._queues.get(receiver, ()))

    def deliver(self, receiver: str) -> Optional[Message]:
        """Pop the next message for ``receiver``; None if nothing is queued."""
        queue = self._queues.get(receiver)
        if not queue:
            return None
        msg = self._pending.pop(queue.popleft())
        self.transcript.log(receiver, Action.DELIVER, msg=msg.msg_id,
                            sender=msg.sender, now=self.clock.now)
        return msg

    def close(self) -> None:
        self.closed = True


class SealedSecret:
    """Instrumented holder for a secret the adversary must not use.

    Every ``reveal()`` is counted; after ``seal()`` any read raises, so a
    code path that completes while sealed provably never touched the value.
    """

    def __init__(self, value):
        self._value = value
        self.reads = 0
        self.sealed = False

    def reveal(self):
        if self.sealed:
            raise PermissionError("secret read after seal")
        self.reads += 1
        return self._value

    def seal(self) -> None:
        self.sealed = True

    def __repr__(self):
        return "SealedSecret(<hidden>)"
