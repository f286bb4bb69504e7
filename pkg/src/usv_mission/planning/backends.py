"""Plan backends and the generate / replan entry points."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, replace
from typing import Protocol

import httpx

from ..dynamics import VesselParams, VesselState
from ..world import Point2, WorldState
from .heuristic import heuristic_plan
from .plan import (
    DEFAULT_CAPABILITIES,
    CapabilitySet,
    FeedbackReport,
    MissionSpec,
    PlanError,
    PlanParseError,
    ReplanBudgetExhausted,
    SymbolicPlan,
    parse_plan,
    serialize_plan,
)
from .prompt import PromptBundle, build_prompt

log = logging.getLogger(__name__)


class BackendError(PlanError):
    """Transport failure, timeout or malformed envelope from a plan backend."""


class PlanRejected(PlanError):
    def __init__(self, responses: list[str], errors: list[Exception]):
        self.responses = responses
        self.errors = errors
        detail = "; ".join(f"{type(e).__name__}: {e}" for e in errors)
        super().__init__(f"plan rejected after {len(responses)} response(s): {detail}")


@dataclass(frozen=True)
class PlanRequest:
    """Structured context a backend may use alongside the prompt text."""

    world: WorldState
    mission: MissionSpec
    start: Point2
    completed: tuple[str, ...] = ()
    unreachable: tuple[str, ...] = ()
    demoted: tuple[str, ...] = ()

    def demote(self, station: str) -> PlanRequest:
        return replace(self, demoted=tuple(s for s in self.demoted if s != station) + (station,))


class PlanBackend(Protocol):
    name: str
    retry_on_invalid: bool

    def propose(self, prompt: PromptBundle, request: PlanRequest) -> str: ...


class HeuristicBackend:
    """Offline stand-in for the LLM; ignores the prompt text and uses the structured mission."""

    name = "heuristic"
    retry_on_invalid = False

    def __init__(self, capabilities: CapabilitySet = DEFAULT_CAPABILITIES):
        self.capabilities = capabilities

    def propose(self, prompt: PromptBundle, request: PlanRequest) -> str:
        plan = heuristic_plan(
            request.mission,
            request.start,
            request.world,
            skip=request.completed + request.unreachable,
            demoted=request.demoted,
        )
        return serialize_plan(plan, self.capabilities)


class RemoteBackend:
    """Chat-completion client: system + user message in, assistant text out."""

    name = "remote"
    retry_on_invalid = True

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str,
        timeout: float = 60.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self._api_key = api_key
        self.timeout = timeout
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self.transcript: list[dict] = []

    @classmethod
    def from_env(cls, base_url: str, model: str, api_key_env: str = "OPENAI_API_KEY", **kw) -> RemoteBackend:
        key = os.environ.get(api_key_env, "").strip()
        if not key:
            raise BackendError(f"environment variable {api_key_env} is not set")
        return cls(base_url, model, key, **kw)

    def _redact(self, text: str) -> str:
        return text.replace(self._api_key, "***") if self._api_key else text

    def propose(self, prompt: PromptBundle, request: PlanRequest) -> str:
        url = f"{self.base_url}/chat/completions"
        body = {
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": prompt.system_text},
                {"role": "user", "content": prompt.user_text},
            ],
        }
        entry: dict = {
            "request": {"url": url, "headers": {"Authorization": "Bearer ***"}, "body": body},
        }
        self.transcript.append(entry)
        try:
            resp = self._client.post(url, json=body, headers={"Authorization": f"Bearer {self._api_key}"})
        except httpx.HTTPError as exc:
            entry["error"] = self._redact(str(exc))
            raise BackendError(f"request to {url} failed: {self._redact(str(exc))}") from exc
        entry["response"] = {"status": resp.status_code, "body": self._redact(resp.text)}
        if resp.status_code >= 400:
            raise BackendError(f"{url} returned HTTP {resp.status_code}")
        try:
            content = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendError("malformed chat-completion response envelope") from exc
        if not isinstance(content, str):
            raise BackendError("chat-completion content is not text")
        return content

    def close(self) -> None:
        self._client.close()


def generate_plan(
    backend: PlanBackend,
    prompt: PromptBundle,
    request: PlanRequest,
    capabilities: CapabilitySet = DEFAULT_CAPABILITIES,
) -> SymbolicPlan:
    """Ask the backend for a plan and validate it; remote backends get one corrective re-prompt."""
    raw = backend.propose(prompt, request)
    try:
        return parse_plan(raw, request.world, capabilities)
    except PlanParseError as first:
        if not backend.retry_on_invalid:
            raise PlanRejected([raw], [first]) from first
        log.warning("backend output rejected (%s); re-prompting once", first)
        note = (
            f"Your previous answer was rejected: {type(first).__name__}: {first}. "
            "Reply with one JSON object with keys \"plan\" (array of {\"action\", \"target\"}) "
            "and \"reasoning\" (string), using only the listed actions and station ids."
        )
        raw2 = backend.propose(prompt.with_note(note), request)
        try:
            return parse_plan(raw2, request.world, capabilities)
        except PlanParseError as second:
            raise PlanRejected([raw, raw2], [first, second]) from second


def replan_with_feedback(
    backend: PlanBackend,
    template: str,
    state: VesselState,
    request: PlanRequest,
    feedback: FeedbackReport,
    max_replans: int = 3,
    params: VesselParams | None = None,
    capabilities: CapabilitySet = DEFAULT_CAPABILITIES,
) -> SymbolicPlan:
    """Regenerate the plan for the unvisited remainder after a failed action.

    The failed station is deferred to the end of the visit order, which the
    heuristic backend honours directly and the remote backend sees in the prompt.
    """
    if feedback.attempt > max_replans:
        raise ReplanBudgetExhausted(
            f"replanning attempt {feedback.attempt} exceeds the budget of {max_replans}"
        )
    request = replace(request, start=feedback.usv_current_location).demote(feedback.failed_action.station)
    prompt = build_prompt(template, request.world, state, request.mission, feedback, params, capabilities)
    return generate_plan(backend, prompt, request, capabilities)


def transcript_json(backend: PlanBackend) -> str | None:
    entries = getattr(backend, "transcript", None)
    if entries is None:
        return None
    return json.dumps(entries, indent=2)
