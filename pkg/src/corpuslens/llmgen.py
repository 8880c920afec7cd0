"""Prompt construction and corpus generation against a chat-completions API.

Two German prompt templates reproduce the generation setup for the child
picture-description corpora: a zero-shot instruction, and a few-shot variant
that embeds two seeded example image-description pairs drawn from stories
other than the target story. Requests go to any OpenAI-compatible endpoint
(configurable base URL) as a single user message combining instruction text
and Base64 data-URI images.

Generation runs are checkpointed to JSONL so interrupted runs resume without
duplicating documents.
"""

from __future__ import annotations

import base64
import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import requests
import yaml

from .corpus import Corpus, Document, Source, load_corpus

MEDIA_TYPES = {
    ".png": "image/png",
    ".jpg": "image/jpeg",
    ".jpeg": "image/jpeg",
    ".gif": "image/gif",
    ".webp": "image/webp",
    ".bmp": "image/bmp",
}

ZERO_SHOT_TEMPLATE = (
    "Du bist ein {age}-jähriges Kind. Wie würdest du dieses Bild beschreiben?"
)
FEW_SHOT_INTRO_TEMPLATE = (
    "Du bist ein {age}-jähriges Kind. Hier sind einige Bildbeschreibungen "
    "von anderen Kindern zu anderen Bildergeschichten:"
)
FEW_SHOT_CLOSING = "Wie würdest du dieses Bild beschreiben?"

ZERO_SHOT_MAX_TOKENS = 2000
FEW_SHOT_MAX_TOKENS = 5000
DEFAULT_TEMPERATURE = 0.7
DEFAULT_AGE_YEARS = 9.6


class GenerationError(RuntimeError):
    """Base class for generation failures."""


class AuthError(GenerationError):
    """Credential missing or rejected; never retried."""


class EmptyCompletionError(GenerationError):
    """Endpoint answered without usable text."""


class PromptMode(str, Enum):
    ZERO_SHOT = "zero_shot"
    FEW_SHOT = "few_shot"


def _format_age(age: float) -> str:
    # 9.6 -> "9.6", 10.0 -> "10"
    return format(age, "g")


def zero_shot_instruction(age: float = DEFAULT_AGE_YEARS) -> str:
    return ZERO_SHOT_TEMPLATE.format(age=_format_age(age))


def few_shot_intro(age: float = DEFAULT_AGE_YEARS) -> str:
    return FEW_SHOT_INTRO_TEMPLATE.format(age=_format_age(age))


def encode_image(path) -> Tuple[str, str]:
    """Base64 (RFC 4648, padded) of the file bytes plus extension media type."""
    p = Path(path)
    ext = p.suffix.lower()
    if ext not in MEDIA_TYPES:
        raise ValueError(f"unrecognized image extension {ext!r} for {p}")
    data = p.read_bytes()
    return base64.b64encode(data).decode("ascii"), MEDIA_TYPES[ext]


@dataclass(frozen=True)
class FewShotExample:
    story_id: str
    image_b64: str
    media_type: str
    text: str


@dataclass(frozen=True)
class PromptSpec:
    """One fully resolved prompt, ready to serialize into messages."""

    mode: PromptMode
    age: float
    instruction_text: str
    closing_text: str
    image_b64: str
    media_type: str
    examples: Tuple[FewShotExample, ...]
    target_story_id: str
    max_tokens: int
    temperature: float

    def __post_init__(self) -> None:
        if self.mode is PromptMode.ZERO_SHOT and self.examples:
            raise ValueError("zero-shot prompts carry no examples")
        if self.mode is PromptMode.FEW_SHOT and not self.examples:
            raise ValueError("few-shot prompts need at least one example")
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must lie in [0, 2]")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        for ex in self.examples:
            if ex.story_id == self.target_story_id:
                raise ValueError(
                    f"example from target story {self.target_story_id!r} not allowed"
                )


@dataclass(frozen=True)
class EndpointConfig:
    """OpenAI-compatible chat-completions endpoint."""

    base_url: str
    model: str
    api_key_env: str = "OPENAI_API_KEY"
    timeout_s: float = 120.0
    max_retries: int = 5
    backoff_s: float = 1.0

    def __post_init__(self) -> None:
        if not self.base_url:
            raise ValueError("base_url required")
        if not self.model:
            raise ValueError("model required")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        object.__setattr__(self, "base_url", self.base_url.rstrip("/"))


@dataclass(frozen=True)
class GeneratedText:
    text: str
    model_id: str
    prompt_tokens: Optional[int]
    completion_tokens: Optional[int]
    latency_s: float
    n_retries: int


@dataclass(frozen=True)
class GenerationPlan:
    """Declarative description of one corpus-generation run.

    story_images maps every usable story to its picture-sheet image; counts
    names the stories to generate for (subset of story_images). Few-shot
    plans also carry the corpus the example pairs are drawn from. max_tokens
    of None selects the per-mode default (2,000 zero-shot / 5,000 few-shot).
    """

    mode: PromptMode
    endpoint: EndpointConfig
    story_images: Dict[str, str]
    counts: Dict[str, int]
    example_corpus: Optional[Corpus] = None
    age: float = DEFAULT_AGE_YEARS
    max_tokens: Optional[int] = None
    temperature: float = DEFAULT_TEMPERATURE
    seed: int = 0
    checkpoint_path: Optional[str] = None
    failure_threshold: float = 0.2
    concurrency: int = 4

    @property
    def source(self) -> Source:
        return Source.LLM_ZS if self.mode is PromptMode.ZERO_SHOT else Source.LLM_FS

    def resolved_max_tokens(self) -> int:
        if self.max_tokens is not None:
            return self.max_tokens
        if self.mode is PromptMode.ZERO_SHOT:
            return ZERO_SHOT_MAX_TOKENS
        return FEW_SHOT_MAX_TOKENS

    def validate(self) -> None:
        if not self.counts:
            raise ValueError("plan names no stories to generate")
        for story, n in self.counts.items():
            if story not in self.story_images:
                raise ValueError(f"story {story!r} has no image in the plan")
            if n < 1:
                raise ValueError(f"story {story!r}: count must be >= 1, got {n}")
        for story, img in self.story_images.items():
            if not Path(img).is_file():
                raise ValueError(f"image for story {story!r} not found: {img}")
        if not (0.0 <= self.temperature <= 2.0):
            raise ValueError("temperature must lie in [0, 2]")
        if not (0.0 <= self.failure_threshold <= 1.0):
            raise ValueError("failure_threshold must lie in [0, 1]")
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")
        if self.resolved_max_tokens() < 1:
            raise ValueError("max_tokens must be >= 1")
        if self.mode is PromptMode.FEW_SHOT:
            if self.example_corpus is None:
                raise ValueError("few-shot plan needs an example corpus")
            for doc in self.example_corpus:
                if doc.story_id not in self.story_images:
                    raise ValueError(
                        f"example document {doc.id!r}: story {doc.story_id!r} "
                        "has no image in the plan"
                    )
            for target in self.counts:
                pool = [
                    d for d in self.example_corpus if d.story_id != target
                ]
                if len(pool) < 2:
                    raise ValueError(
                        f"fewer than 2 non-target example documents for story {target!r}"
                    )


def build_prompt(
    plan: GenerationPlan, mode: PromptMode, target_story: str, rng_seed
) -> PromptSpec:
    """Resolve one prompt; few-shot examples are drawn with the given seed.

    Example pairs are sampled without replacement from the plan's example
    corpus, restricted to documents whose story differs from the target.
    """
    if target_story not in plan.story_images:
        raise ValueError(f"target story {target_story!r} missing from the plan")
    img_b64, media = encode_image(plan.story_images[target_story])
    age = plan.age

    if mode is PromptMode.ZERO_SHOT:
        return PromptSpec(
            mode=mode,
            age=age,
            instruction_text=zero_shot_instruction(age),
            closing_text="",
            image_b64=img_b64,
            media_type=media,
            examples=(),
            target_story_id=target_story,
            max_tokens=plan.max_tokens or ZERO_SHOT_MAX_TOKENS,
            temperature=plan.temperature,
        )

    if plan.example_corpus is None:
        raise ValueError("few-shot prompt requires an example corpus")
    pool = [d for d in plan.example_corpus if d.story_id != target_story]
    if len(pool) < 2:
        raise ValueError(
            f"fewer than 2 non-target example documents for story {target_story!r}"
        )
    rng = np.random.default_rng(rng_seed)
    chosen = rng.choice(len(pool), size=2, replace=False)
    examples = []
    for k in chosen:
        doc = pool[int(k)]
        ex_b64, ex_media = encode_image(plan.story_images[doc.story_id])
        examples.append(
            FewShotExample(
                story_id=doc.story_id,
                image_b64=ex_b64,
                media_type=ex_media,
                text=doc.text,
            )
        )
    return PromptSpec(
        mode=mode,
        age=age,
        instruction_text=few_shot_intro(age),
        closing_text=FEW_SHOT_CLOSING,
        image_b64=img_b64,
        media_type=media,
        examples=tuple(examples),
        target_story_id=target_story,
        max_tokens=plan.max_tokens or FEW_SHOT_MAX_TOKENS,
        temperature=plan.temperature,
    )


def _image_item(b64: str, media_type: str) -> dict:
    return {
        "type": "image_url",
        "image_url": {"url": f"data:{media_type};base64,{b64}"},
    }


def build_messages(spec: PromptSpec) -> List[dict]:
    """Messages array for the chat-completions body.

    One user message: instruction text, then (few-shot) each example as an
    image followed by its description, then the closing question, then the
    target image.
    """
    content: List[dict] = [{"type": "text", "text": spec.instruction_text}]
    for ex in spec.examples:
        content.append(_image_item(ex.image_b64, ex.media_type))
        content.append({"type": "text", "text": ex.text})
    if spec.closing_text:
        content.append({"type": "text", "text": spec.closing_text})
    content.append(_image_item(spec.image_b64, spec.media_type))
    return [{"role": "user", "content": content}]


def build_request_body(endpoint: EndpointConfig, spec: PromptSpec) -> dict:
    """Full JSON body; everything not listed stays at provider defaults."""
    return {
        "model": endpoint.model,
        "messages": build_messages(spec),
        "max_tokens": spec.max_tokens,
        "temperature": spec.temperature,
    }


def generate_text(endpoint: EndpointConfig, spec: PromptSpec) -> GeneratedText:
    """One chat-completion call with exponential-backoff retries.

    429, 5xx and connection errors are retried up to endpoint.max_retries
    times; auth failures are terminal immediately.
    """
    api_key = os.environ.get(endpoint.api_key_env)
    if not api_key:
        raise AuthError(f"credential missing: set {endpoint.api_key_env}")
    url = endpoint.base_url + "/chat/completions"
    body = build_request_body(endpoint, spec)
    headers = {
        "Authorization": f"Bearer {api_key}",
        "Content-Type": "application/json",
    }

    start = time.monotonic()
    last_err: Optional[str] = None
    for attempt in range(endpoint.max_retries + 1):
        if attempt:
            time.sleep(endpoint.backoff_s * 2 ** (attempt - 1))
        try:
            resp = requests.post(
                url, json=body, headers=headers, timeout=endpoint.timeout_s
            )
        except requests.RequestException as exc:
            last_err = f"connection error: {exc}"
            continue
        if resp.status_code in (401, 403):
            raise AuthError(f"auth failure: HTTP {resp.status_code}")
        if resp.status_code == 429 or resp.status_code >= 500:
            last_err = f"HTTP {resp.status_code}"
            continue
        if resp.status_code != 200:
            raise GenerationError(f"HTTP {resp.status_code}: {resp.text[:500]}")
        payload = resp.json()
        choices = payload.get("choices") or []
        text = ""
        if choices:
            text = (choices[0].get("message") or {}).get("content") or ""
        if not text:
            raise EmptyCompletionError("empty completion from endpoint")
        usage = payload.get("usage") or {}
        return GeneratedText(
            text=text,
            model_id=payload.get("model", endpoint.model),
            prompt_tokens=usage.get("prompt_tokens"),
            completion_tokens=usage.get("completion_tokens"),
            latency_s=time.monotonic() - start,
            n_retries=attempt,
        )
    raise GenerationError(
        f"transient failures exhausted {endpoint.max_retries} retries ({last_err})"
    )


def _doc_record(doc: Document) -> dict:
    rec = {
        "id": doc.id,
        "story": doc.story_id,
        "text": doc.text,
        "source": doc.source.value,
    }
    if doc.meta:
        rec["meta"] = dict(doc.meta)
    return rec


def _load_checkpoint(path) -> Dict[str, Document]:
    done: Dict[str, Document] = {}
    p = Path(path)
    if not p.is_file():
        return done
    with p.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            done[rec["id"]] = Document(
                id=rec["id"],
                story_id=rec["story"],
                source=rec["source"],
                text=rec["text"],
                meta=rec.get("meta", {}),
            )
    return done


def generate_corpus(plan: GenerationPlan) -> Corpus:
    """Run the whole plan: per story, `count` independent generations.

    Document ids are "{source}-{story}-{i:03d}"; each document derives its
    own rng seed from (plan.seed, story index, i), so few-shot example draws
    are reproducible and independent across documents. Completed documents
    are appended to the checkpoint as they finish (writes serialized); on
    resume, checkpointed ids are skipped. The run aborts once the failure
    rate over finished jobs exceeds plan.failure_threshold.
    """
    plan.validate()
    source = plan.source
    stories = sorted(plan.counts)
    done: Dict[str, Document] = {}
    if plan.checkpoint_path:
        done = _load_checkpoint(plan.checkpoint_path)

    jobs = []
    for s_idx, story in enumerate(stories):
        for i in range(plan.counts[story]):
            doc_id = f"{source.value}-{story}-{i:03d}"
            if doc_id not in done:
                jobs.append((doc_id, story, s_idx, i))
    total_jobs = len(jobs)

    lock = threading.Lock()
    failures: List[str] = []
    fresh: Dict[str, Document] = {}

    ckpt_fh = None
    if plan.checkpoint_path and jobs:
        ckpt_fh = open(plan.checkpoint_path, "a", encoding="utf-8")

    def run_one(doc_id: str, story: str, s_idx: int, i: int) -> Document:
        seed = [plan.seed, s_idx, i]
        spec = build_prompt(plan, plan.mode, story, seed)
        out = generate_text(plan.endpoint, spec)
        meta = {
            "model": out.model_id,
            "prompt_tokens": out.prompt_tokens,
            "completion_tokens": out.completion_tokens,
            "latency_s": round(out.latency_s, 3),
            "retries": out.n_retries,
            "seed": seed,
        }
        if spec.examples:
            meta["example_stories"] = [ex.story_id for ex in spec.examples]
        return Document(
            id=doc_id, story_id=story, source=source, text=out.text, meta=meta
        )

    try:
        with ThreadPoolExecutor(max_workers=plan.concurrency) as ex:
            fut_map = {
                ex.submit(run_one, *job): job[0] for job in jobs
            }
            for fut in as_completed(fut_map):
                doc_id = fut_map[fut]
                try:
                    doc = fut.result()
                except Exception as exc:
                    with lock:
                        failures.append(f"{doc_id}: {exc}")
                        n_failed = len(failures)
                    if n_failed / total_jobs > plan.failure_threshold:
                        for other in fut_map:
                            other.cancel()
                        raise GenerationError(
                            f"aborted: {n_failed}/{total_jobs} generations failed "
                            f"(threshold {plan.failure_threshold}); first failures: "
                            + "; ".join(failures[:5])
                        )
                    continue
                with lock:
                    fresh[doc_id] = doc
                    if ckpt_fh is not None:
                        ckpt_fh.write(
                            json.dumps(_doc_record(doc), ensure_ascii=False) + "\n"
                        )
                        ckpt_fh.flush()
    finally:
        if ckpt_fh is not None:
            ckpt_fh.close()

    if failures:
        raise GenerationError(
            f"{len(failures)}/{total_jobs} generations failed: "
            + "; ".join(failures[:5])
        )
    docs = sorted({**done, **fresh}.values(), key=lambda d: d.id)
    return Corpus(name=source.value, documents=tuple(docs))


def load_plan(path) -> GenerationPlan:
    """Read a YAML generation plan; relative paths resolve against the file."""
    p = Path(path)
    with p.open("r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"{p}: plan must be a mapping")
    base = p.parent

    def respath(v: str) -> str:
        q = Path(v)
        return str(q if q.is_absolute() else base / q)

    try:
        mode = PromptMode(raw["mode"])
        ep = raw["endpoint"]
        endpoint = EndpointConfig(
            base_url=ep["base_url"],
            model=ep["model"],
            api_key_env=ep.get("api_key_env", "OPENAI_API_KEY"),
            timeout_s=float(ep.get("timeout_s", 120.0)),
            max_retries=int(ep.get("max_retries", 5)),
            backoff_s=float(ep.get("backoff_s", 1.0)),
        )
        stories = raw["stories"]
        if not isinstance(stories, dict) or not stories:
            raise ValueError("stories must be a non-empty mapping")
        story_images = {}
        counts = {}
        for story, entry in stories.items():
            story_images[story] = respath(entry["image"])
            if "count" in entry:
                counts[story] = int(entry["count"])
    except KeyError as exc:
        raise ValueError(f"{p}: missing plan key {exc}") from exc

    example_corpus = None
    if "examples_manifest" in raw:
        example_corpus = load_corpus(respath(raw["examples_manifest"]))

    plan = GenerationPlan(
        mode=mode,
        endpoint=endpoint,
        story_images=story_images,
        counts=counts,
        example_corpus=example_corpus,
        age=float(raw.get("age", DEFAULT_AGE_YEARS)),
        max_tokens=raw.get("max_tokens"),
        temperature=float(raw.get("temperature", DEFAULT_TEMPERATURE)),
        seed=int(raw.get("seed", 0)),
        checkpoint_path=(
            respath(raw["checkpoint"]) if "checkpoint" in raw else None
        ),
        failure_threshold=float(raw.get("failure_threshold", 0.2)),
        concurrency=int(raw.get("concurrency", 4)),
    )
    return plan
