"""HTTP service for interactive resolution of residual ambiguity.

A session tags raw text with the interactive policy and queues every
still-ambiguous token in document order.  Clients list pending items,
submit one choice per item, and fetch the final tagged output plus the
statistics report once nothing is pending.  Sessions live in memory only;
mutations are serialized per session.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .lexicon import Lexicon
from .matcher import Matcher
from .model import render_display, serialize_parse
from .pipeline import (
    CorpusResult,
    ResolutionPolicy,
    compile_stats,
    render_tsv,
    resolve_by_user,
    tag_corpus,
)
from .ruledsl import RuleSet


class CreateSessionRequest(BaseModel):
    text: str


class ChoiceRequest(BaseModel):
    sentence_index: int
    token_index: int
    parse_index: int


@dataclass
class Session:
    id: str
    result: CorpusResult
    chosen: dict[tuple[int, int], int] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def remaining(self) -> int:
        return len(self.result.pending) - len(self.chosen)

    def pending_payload(self) -> list[dict]:
        items = []
        for si, ti in self.result.pending:
            if (si, ti) in self.chosen:
                continue
            sentence = self.result.sentences[si]
            token = sentence.tokens[ti]
            items.append(
                {
                    "sentence_index": si,
                    "token_index": ti,
                    "surface": token.surface,
                    "context": [tok.surface for tok in sentence.tokens],
                    "candidates": [
                        {
                            "index": i,
                            "canonical": serialize_parse(parse),
                            "display": render_display(parse),
                        }
                        for i, parse in enumerate(token.parses)
                    ],
                }
            )
        return items


def create_app(
    rules: RuleSet, lexicon: Lexicon, matcher: Matcher | None = None
) -> FastAPI:
    app = FastAPI(title="ruletag interactive resolution")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    shared_matcher = matcher or Matcher()
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with store_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionRequest):
        result = tag_corpus(
            body.text, rules, lexicon, ResolutionPolicy("interactive"), shared_matcher
        )
        session = Session(id=uuid.uuid4().hex, result=result)
        with store_lock:
            sessions[session.id] = session
        return {"session_id": session.id, "pending_count": session.remaining()}

    @app.get("/sessions/{session_id}/pending")
    def list_pending(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {
                "items": session.pending_payload(),
                "remaining": session.remaining(),
            }

    @app.post("/sessions/{session_id}/choices")
    def submit_choice(session_id: str, body: ChoiceRequest):
        session = get_session(session_id)
        key = (body.sentence_index, body.token_index)
        with session.lock:
            if key not in session.result.pending:
                raise HTTPException(
                    status_code=404, detail="token is not pending in this session"
                )
            previous = session.chosen.get(key)
            if previous is not None:
                if previous == body.parse_index:
                    return {"remaining": session.remaining(), "duplicate": True}
                raise HTTPException(
                    status_code=409,
                    detail="token already resolved with a different choice",
                )
            sentence = session.result.sentences[body.sentence_index]
            try:
                resolved = resolve_by_user(
                    sentence, body.token_index, body.parse_index
                )
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
            session.result.replace_sentence(body.sentence_index, resolved)
            session.chosen[key] = body.parse_index
            return {"remaining": session.remaining(), "duplicate": False}

    @app.get("/sessions/{session_id}/result")
    def fetch_result(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.remaining() > 0:
                raise HTTPException(
                    status_code=409,
                    detail=f"{session.remaining()} tokens still pending",
                )
            stats = compile_stats(session.result)
            return {
                "tsv": render_tsv(session.result.sentences),
                "stats": stats.to_json(),
            }

    return app
