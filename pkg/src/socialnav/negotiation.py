"""Priority negotiation between the two agents.

Messages are exchanged on a fixed sim-time schedule (one message per `latency`
seconds). Two backends generate replies: a deterministic rule oracle that runs
fully offline, and a chat-completions HTTP backend configured through the
LLM_BASE_URL / LLM_MODEL / LLM_API_KEY environment variables. Alongside the free
text, each reply carries a structured verdict so consensus is machine-checkable.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .world import PriorityType

log = logging.getLogger(__name__)

MESSAGES_PER_AGENT_BUDGET = 4
DEFAULT_LATENCY = 1.0  # sim seconds between message events
LLM_TIMEOUT_S = 10.0  # wall-clock timeout per request

PROMPT_TEMPLATE = (
    "You are taking someone to TASK. There is another agent taking someone to a "
    "location. You will have a conversation until you determine whether you have "
    "more or less priority as them depending on the tasks you and they are "
    "performing. Do not include pleasantries and be concise. Once you have "
    "reached a consensus with the other agent, output the number 1 and nothing "
    "else. Remembering your task correctly is paramount!"
)

TASK_CATALOG = {
    PriorityType.HOSPITAL: [
        "the hospital",
        "the emergency room",
        "the operating room",
        "the ER",
        "get surgery",
    ],
    PriorityType.AIRPORT: [
        "the airport",
        "catch a flight",
        "board a plane",
        "reach the airport",
        "go to the airport",
    ],
    PriorityType.GROCERY: [
        "the grocery store",
        "the supermarket",
        "the store",
        "go grocery shopping",
        "buy groceries",
    ],
}

_RANK = {PriorityType.HOSPITAL: 3, PriorityType.AIRPORT: 2, PriorityType.GROCERY: 1}


def render_prompt(task_string: str) -> str:
    """Substitute the task into the negotiation prompt."""
    if not task_string:
        raise ValueError("empty task string")
    return PROMPT_TEMPLATE.replace("TASK", task_string, 1)


class Verdict(Enum):
    SELF_HIGHER = "self_higher"
    OTHER_HIGHER = "other_higher"
    UNDECIDED = "undecided"


@dataclass
class Message:
    sender: int
    sim_time: float
    text: str


@dataclass
class Consensus:
    reached: bool = False
    higher_priority_agent: Optional[int] = None
    reached_at: Optional[float] = None
    correct: Optional[bool] = None


@dataclass
class DialogueState:
    history: list = field(default_factory=list)  # list[Message]
    turn: int = 0
    verdicts: list = field(default_factory=lambda: [Verdict.UNDECIDED, Verdict.UNDECIDED])
    consensus: Consensus = field(default_factory=Consensus)
    next_event_time: float = 0.0
    active: bool = True

    def messages_sent(self, agent_id: int) -> int:
        return sum(1 for m in self.history if m.sender == agent_id)

    def budget_exhausted(self) -> bool:
        return all(self.messages_sent(i) >= MESSAGES_PER_AGENT_BUDGET for i in (0, 1))


def infer_type_from_text(text: str) -> Optional[PriorityType]:
    """Match a free-text task description against the catalog."""
    lowered = text.lower()
    for ptype, strings in TASK_CATALOG.items():
        for s in strings:
            if s.lower() in lowered:
                return ptype
    return None


class RuleBackend:
    """Deterministic scripted negotiator: state task, compare, confirm with '1'."""

    def __init__(self, agent_id: int, priority_type: PriorityType, task_string: str):
        self.agent_id = agent_id
        self.priority_type = priority_type
        self.task_string = task_string

    def reply(self, dialogue: DialogueState) -> tuple[str, Verdict]:
        other_msgs = [m for m in dialogue.history if m.sender != self.agent_id]
        other_type = None
        for m in other_msgs:
            other_type = infer_type_from_text(m.text) or other_type
        if other_type is None:
            return (f"I am taking someone to {self.task_string}. What is your task?",
                    Verdict.UNDECIDED)
        mine, theirs = _RANK[self.priority_type], _RANK[other_type]
        verdict = Verdict.SELF_HIGHER if mine > theirs else Verdict.OTHER_HIGHER
        other_compared = any("go first" in m.text.lower() for m in other_msgs)
        if other_compared or dialogue.verdicts[self.agent_id] is not Verdict.UNDECIDED:
            return "1", verdict
        if mine > theirs:
            comparison = "Your task is less urgent than mine, so I should go first."
        else:
            comparison = "Your task is more urgent than mine, so you should go first."
        return f"I am taking someone to {self.task_string}. {comparison}", verdict


class LlmBackend:
    """Chat-completions negotiator. Any transport failure degrades to Undecided."""

    def __init__(self, agent_id: int, priority_type: PriorityType, task_string: str,
                 base_url: Optional[str] = None, model: Optional[str] = None,
                 api_key: Optional[str] = None):
        self.agent_id = agent_id
        self.priority_type = priority_type
        self.task_string = task_string
        self.base_url = (base_url or os.environ.get("LLM_BASE_URL", "")).rstrip("/")
        self.model = model or os.environ.get("LLM_MODEL", "")
        self.api_key = api_key or os.environ.get("LLM_API_KEY", "")

    def configured(self) -> bool:
        return bool(self.base_url and self.model)

    def reply(self, dialogue: DialogueState) -> tuple[str, Verdict]:
        import requests

        messages = [{"role": "system", "content": render_prompt(self.task_string)}]
        for m in dialogue.history:
            role = "assistant" if m.sender == self.agent_id else "user"
            messages.append({"role": role, "content": m.text})
        if not dialogue.history:
            messages.append({"role": "user", "content": "Hello, I am the other agent."})
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                f"{self.base_url}/chat/completions",
                json={"model": self.model, "messages": messages, "temperature": 0},
                headers=headers, timeout=LLM_TIMEOUT_S)
            resp.raise_for_status()
            text = resp.json()["choices"][0]["message"]["content"].strip()
        except Exception as exc:  # transport/parse failure: keep the run going
            log.warning("LLM request failed for agent %d: %s", self.agent_id, exc)
            return "", Verdict.UNDECIDED
        return text, self._parse_verdict(text, dialogue)

    def _parse_verdict(self, text: str, dialogue: DialogueState) -> Verdict:
        """Extract agreement from a reply: a trailing '1' line signals consensus;
        the ordering is recovered by comparing the task types named in the final
        two messages. Parse failure yields Undecided."""
        recent = [m.text for m in dialogue.history[-2:]] + [text]
        other_type = None
        for m in dialogue.history:
            if m.sender != self.agent_id:
                other_type = infer_type_from_text(m.text) or other_type
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        agreed = bool(lines) and lines[-1] == "1"
        if not agreed:
            lowered = " ".join(recent).lower()
            if "you go first" in lowered or "you should go first" in lowered:
                pass  # fall through to rank comparison below
            elif other_type is None:
                return Verdict.UNDECIDED
        if other_type is None:
            return Verdict.UNDECIDED
        mine, theirs = _RANK[self.priority_type], _RANK[other_type]
        if mine == theirs:
            return Verdict.UNDECIDED
        return Verdict.SELF_HIGHER if mine > theirs else Verdict.OTHER_HIGHER


def next_message(backend, dialogue: DialogueState) -> tuple[str, Verdict]:
    """Generate the reply for the agent whose turn it is."""
    if dialogue.messages_sent(backend.agent_id) >= MESSAGES_PER_AGENT_BUDGET:
        raise RuntimeError("message budget exhausted")
    return backend.reply(dialogue)


def detect_consensus(dialogue: DialogueState,
                     true_ranks: Optional[tuple[int, int]] = None) -> Consensus:
    """Consensus once the structured verdicts are complementary; contradictory or
    undecided verdicts mean no agreement."""
    v0, v1 = dialogue.verdicts
    complementary = (
        (v0 is Verdict.SELF_HIGHER and v1 is Verdict.OTHER_HIGHER)
        or (v0 is Verdict.OTHER_HIGHER and v1 is Verdict.SELF_HIGHER))
    if not complementary:
        return Consensus(False, None, None, None)
    winner = 0 if v0 is Verdict.SELF_HIGHER else 1
    t = dialogue.history[-1].sim_time if dialogue.history else 0.0
    correct = None
    if true_ranks is not None:
        truly_higher = 0 if true_ranks[0] > true_ranks[1] else 1
        correct = winner == truly_higher
    return Consensus(True, winner, t, correct)


def advance_dialogue(dialogue: DialogueState, sim_time: float, backends,
                     latency: float = DEFAULT_LATENCY,
                     true_ranks: Optional[tuple[int, int]] = None) -> DialogueState:
    """Process all message events due at or before `sim_time`."""
    while dialogue.active and sim_time >= dialogue.next_event_time - 1e-9:
        sender = dialogue.turn
        text, verdict = next_message(backends[sender], dialogue)
        dialogue.history.append(Message(sender, dialogue.next_event_time, text))
        dialogue.verdicts[sender] = verdict
        dialogue.turn = 1 - sender
        consensus = detect_consensus(dialogue, true_ranks)
        if consensus.reached:
            dialogue.consensus = consensus
            dialogue.active = False
        elif dialogue.budget_exhausted():
            dialogue.active = False
        else:
            dialogue.next_event_time += latency
    return dialogue


def transcript_records(dialogue: DialogueState) -> list[dict]:
    """JSONL-ready transcript: one record per message plus a final consensus record."""
    records = [{"type": "message", "sender": m.sender, "sim_time": m.sim_time,
                "text": m.text} for m in dialogue.history]
    c = dialogue.consensus
    records.append({"type": "consensus", "reached": c.reached,
                    "higher_priority_agent": c.higher_priority_agent,
                    "reached_at": c.reached_at, "correct": c.correct})
    return records


def write_transcript(path, dialogue: DialogueState) -> None:
    with open(path, "w") as f:
        for rec in transcript_records(dialogue):
            f.write(json.dumps(rec) + "\n")
