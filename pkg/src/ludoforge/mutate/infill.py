"""Client for an external fill-in-the-middle completion endpoint.

Sends the (prefix, suffix) of a masked expression to an HTTP endpoint and
splices whatever comes back. The request body is a template with
``{prefix}`` / ``{suffix}`` slots, and the completion is pulled out of the
response JSON by a dotted path, so most infill servers can be matched by
configuration alone. A chat-style whole-game template is also provided
for endpoints that modify a full game given reference games.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass, field

from ..gdl import GameTree, parse_source, print_canonical, splice
from ..gdl.lexer import GdlError
from .request import MutationRequest


class EndpointError(Exception):
    pass


class InfillTimeout(EndpointError):
    pass


class EmptyCompletion(EndpointError):
    pass


@dataclass(frozen=True)
class InfillEndpointConfig:
    url: str
    request_template: dict = field(
        default_factory=lambda: {
            "prefix": "{prefix}",
            "suffix": "{suffix}",
            "temperature": 1.0,
            "top_k": 50,
            "max_new_tokens": 256,
        }
    )
    response_path: str = "completion"
    timeout: float = 30.0
    retries: int = 2


def _fill(template, prefix: str, suffix: str):
    if isinstance(template, str):
        return template.replace("{prefix}", prefix).replace("{suffix}", suffix)
    if isinstance(template, dict):
        return {k: _fill(v, prefix, suffix) for k, v in template.items()}
    if isinstance(template, list):
        return [_fill(v, prefix, suffix) for v in template]
    return template


def _dig(payload, path: str):
    cur = payload
    for part in path.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict):
            cur = cur.get(part)
        else:
            return None
        if cur is None:
            return None
    return cur


def request_completion(config: InfillEndpointConfig, prefix: str, suffix: str) -> str:
    body = json.dumps(_fill(config.request_template, prefix, suffix)).encode("utf-8")
    last_err: Exception | None = None
    for _ in range(config.retries + 1):
        req = urllib.request.Request(
            config.url, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=config.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
            completion = _dig(payload, config.response_path)
            if not completion or not str(completion).strip():
                raise EmptyCompletion("endpoint returned no completion")
            return str(completion)
        except EmptyCompletion:
            raise
        except TimeoutError as err:
            last_err = InfillTimeout(str(err))
        except (urllib.error.URLError, urllib.error.HTTPError, OSError, ValueError) as err:
            last_err = err
    raise EndpointError(f"endpoint failed after {config.retries + 1} attempts: {last_err}")


def infill_mutate(
    request: MutationRequest, tree: GameTree, config: InfillEndpointConfig
) -> str:
    """Ask the endpoint to rewrite the masked expression; canonical text out.

    The completion may be arbitrary text; a splice that no longer parses is
    surfaced as EndpointError and the caller records a failed attempt
    (uncompilable candidates are scored -3 downstream anyway).
    """
    completion = request_completion(config, request.prefix, request.suffix).strip()
    try:
        node = parse_source(completion).root
        mutated = splice(tree, request.site, node)
    except GdlError as err:
        raise EndpointError(f"completion does not splice: {err}") from err
    return print_canonical(mutated)


def chat_modification_messages(
    reference_sources: list[str], target_source: str
) -> list[dict]:
    """Whole-game modification protocol for chat-style endpoints: reference
    games for style, one game to modify, code-only replies."""
    blocks = []
    for i, src in enumerate(reference_sources, start=1):
        blocks.append(f"=====Game {i}======\n{src}\n==========")
    user = (
        "Rewrite one game written in this board-game description language "
        "into a different playable game. The reference games below show the "
        "valid syntax and overall structure:\n\n"
        + "\n\n".join(blocks)
        + "\n\nNow produce a modified version of the game below. Keep the "
        "grammar valid, and change at least one rule so the result is a new "
        "game rather than a copy.\n\n=====Game to modify=====\n"
        + target_source
        + "\n==========\n\n=====Modified game=====\n"
    )
    return [
        {
            "role": "system",
            "content": (
                "You write syntactically correct game descriptions in a "
                "parenthesized board-game rules language, and nothing else."
            ),
        },
        {"role": "user", "content": user},
    ]
