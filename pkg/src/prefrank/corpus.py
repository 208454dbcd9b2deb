"""Synthetic job-search corpus: entities, rule-based teacher, prompts.

Everything here is a pure function of its inputs. The generator builds
queries and job items from seeded word pools, with long-tailed
description lengths (median near 900 whitespace tokens). The teacher is
a transparent lexical rule that grades (query, item) pairs on a 0..4
scale; grades map to (p*_yes, p*_no) soft labels for distillation-style
fine-tuning.

Prompt layout (byte-exact template):

    <|sys|>Decide if the job matches the query. Answer yes or no.<|/sys|>
    <|q|>{query}<|/q|>
    <|meta|>{title}|{company}|{location}|{employment_type}|{remote}<|/meta|>
    <|desc|>{description}<|/desc|>
    <|ans|>

segments concatenate in that order with no separators.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, asdict

from .tokenizer import Vocab, encode, encode_with_spans

SYSTEM_PREFIX = "<|sys|>Decide if the job matches the query. Answer yes or no.<|/sys|>"
SUFFIX = "<|ans|>"

EMPLOYMENT_TYPES = ("full_time", "part_time", "contract", "internship")

# Teacher rule: weighted term overlap, bucketed into five grades.
GRADE_BUCKETS = (0.15, 0.35, 0.55, 0.75)
TITLE_WEIGHT = 0.6
CONTENT_WEIGHT = 0.3
METADATA_WEIGHT = 0.1

SOFT_LABELS = {0: 0.1, 1: 0.3, 2: 0.5, 3: 0.7, 4: 0.9}


class PromptBudgetError(ValueError):
    """Token budget too small for the non-description prompt segments."""


@dataclass(frozen=True)
class Query:
    id: str
    text: str


@dataclass(frozen=True)
class JobItem:
    id: str
    title: str
    company: str
    location: str
    employment_type: str
    remote_eligible: bool
    description: str


@dataclass(frozen=True)
class GradedPair:
    query_id: str
    item_id: str
    grade: int
    p_star_yes: float
    p_star_no: float


@dataclass(frozen=True)
class PromptSegments:
    system_prefix: str
    query_text: str
    metadata_text: str
    description_text: str
    suffix: str

    def full_prompt(self) -> str:
        return (
            self.system_prefix
            + self.query_text
            + self.metadata_text
            + self.description_text
            + self.suffix
        )


# ---------------------------------------------------------------------------
# word pools

_SENIORITY = ["junior", "senior", "staff", "lead", "principal", "associate"]
_DOMAIN = [
    "data", "software", "machine learning", "frontend", "backend", "platform",
    "security", "cloud", "mobile", "devops", "analytics", "infrastructure",
    "search", "payments", "embedded", "product",
]
_ROLE = [
    "engineer", "developer", "analyst", "scientist", "architect", "manager",
    "designer", "administrator", "consultant", "researcher",
]
_COMPANY = [
    "acme systems", "northwind labs", "bluepeak software", "quantic works",
    "helio dynamics", "vertex analytics", "cobalt forge", "lumen grid",
    "arcadia compute", "redwood stack", "ion harbor", "nimbus trade",
    "granite flow", "solstice media", "aurora freight", "pinnacle health",
]
_CITY = [
    "austin", "berlin", "boston", "chicago", "denver", "dublin", "london",
    "madrid", "melbourne", "montreal", "oslo", "paris", "seattle", "singapore",
    "toronto", "zurich",
]
_SKILL = [
    "python", "java", "rust", "go", "sql", "spark", "kubernetes", "airflow",
    "react", "typescript", "terraform", "kafka", "postgres", "redis",
    "tensorflow", "pytorch", "docker", "linux", "graphql", "scala", "swift",
    "kotlin", "hadoop", "snowflake", "tableau", "excel", "git", "jenkins",
    "ansible", "prometheus", "grafana", "elasticsearch", "mongodb", "flink",
    "dbt", "looker", "sagemaker", "databricks", "numpy", "pandas",
]
_VERB = [
    "design", "build", "maintain", "optimize", "ship", "operate", "automate",
    "scale", "refactor", "monitor", "document", "review", "migrate", "test",
]
_ADJ = [
    "scalable", "reliable", "distributed", "low latency", "fault tolerant",
    "secure", "observable", "cost efficient", "high throughput", "modular",
]
_NOUN = [
    "pipelines", "services", "dashboards", "models", "apis", "schemas",
    "workflows", "clusters", "experiments", "integrations", "datasets",
    "deployments",
]
_AREA = [
    "growth", "revenue", "core", "trust", "marketplace", "logistics",
    "billing", "onboarding", "insights", "activation",
]
_BENEFIT = [
    "equity grants", "learning budget", "flexible hours", "wellness stipend",
    "parental leave", "commuter benefits", "annual offsite", "home office budget",
    "health coverage", "retirement matching",
]


def _words(text: str) -> set[str]:
    out = set()
    word = []
    for ch in text.lower():
        if ch.isalnum():
            word.append(ch)
        elif word:
            out.add("".join(word))
            word = []
    if word:
        out.add("".join(word))
    return out


# ---------------------------------------------------------------------------
# generation


def _make_description(rng: random.Random, title: str, company: str,
                      location: str, remote: bool, skills: list[str]) -> str:
    target = int(rng.lognormvariate(math.log(900.0), 0.35))
    target = max(80, min(target, 4000))

    sentences = [
        f"About this role: {company} is hiring a {title} in {location}.",
        f"Required skills: {', '.join(skills[:4])}.",
    ]
    if remote:
        sentences.append("This position is remote eligible for candidates in approved regions.")
    count = sum(len(s.split()) for s in sentences)
    while count < target:
        kind = rng.randrange(5)
        if kind == 0:
            s = (f"You will {rng.choice(_VERB)} {rng.choice(_ADJ)} "
                 f"{rng.choice(_NOUN)} supporting {rng.choice(_AREA)} teams.")
        elif kind == 1:
            s = (f"Experience with {rng.choice(skills)} and {rng.choice(_SKILL)} "
                 f"in production environments is required.")
        elif kind == 2:
            s = (f"Day to day work: {rng.choice(_VERB)} {rng.choice(_NOUN)}, "
                 f"{rng.choice(_VERB)} {rng.choice(_NOUN)}, "
                 f"{rng.choice(_VERB)} {rng.choice(_ADJ)} {rng.choice(_NOUN)}.")
        elif kind == 3:
            s = (f"Our stack: {', '.join(rng.sample(_SKILL, 5))}, "
                 f"plus internal tooling built on {rng.choice(skills)}.")
        else:
            s = (f"Benefits include {rng.choice(_BENEFIT)}, {rng.choice(_BENEFIT)}, "
                 f"{rng.choice(_BENEFIT)}.")
        sentences.append(s)
        count += len(s.split())
    return " ".join(sentences)


def generate_corpus(seed: int, n_queries: int, n_items: int) -> tuple[list[Query], list[JobItem]]:
    """Deterministic synthetic corpus for a fixed (seed, n_queries, n_items)."""
    if n_queries < 1 or n_items < 1:
        raise ValueError("need at least one query and one item")

    item_rng = random.Random(f"{seed}:items")
    items = []
    item_skills = []
    for i in range(n_items):
        seniority = item_rng.choice(_SENIORITY)
        domain = item_rng.choice(_DOMAIN)
        role = item_rng.choice(_ROLE)
        title = f"{seniority} {domain} {role}"
        company = item_rng.choice(_COMPANY)
        location = item_rng.choice(_CITY)
        employment = item_rng.choices(EMPLOYMENT_TYPES, weights=(70, 10, 15, 5))[0]
        remote = item_rng.random() < 0.35
        skills = item_rng.sample(_SKILL, item_rng.randint(4, 8))
        items.append(JobItem(
            id=f"item-{i:06d}",
            title=title,
            company=company,
            location=location,
            employment_type=employment,
            remote_eligible=remote,
            description=_make_description(item_rng, title, company, location, remote, skills),
        ))
        item_skills.append(skills)

    query_rng = random.Random(f"{seed}:queries")
    queries = []
    for i in range(n_queries):
        anchor_idx = query_rng.randrange(n_items)
        anchor = items[anchor_idx]
        terms = anchor.title.split()
        if query_rng.random() < 0.4:
            terms = terms[1:]  # drop seniority
        if query_rng.random() < 0.5:
            terms.append(query_rng.choice(item_skills[anchor_idx]))
        if anchor.remote_eligible and query_rng.random() < 0.3:
            terms.append("remote")
        if query_rng.random() < 0.2:
            terms.extend(anchor.location.split())
        if anchor.employment_type != "full_time" and query_rng.random() < 0.3:
            terms.extend(anchor.employment_type.split("_"))
        queries.append(Query(id=f"q-{i:04d}", text=" ".join(terms)))
    return queries, items


# ---------------------------------------------------------------------------
# teacher


def _metadata_bonus(query_words: set[str], item: JobItem) -> float:
    matched = 0
    if "remote" in query_words and item.remote_eligible:
        matched += 1
    if set(item.employment_type.split("_")) <= query_words:
        matched += 1
    if _words(item.location) <= query_words:
        matched += 1
    return matched / 3.0


def teacher_score(query: Query, item: JobItem) -> float:
    """Raw teacher score in [0, 1] before bucketing."""
    q = _words(query.text)
    if not q:
        return 0.0
    t = _words(item.title)
    d = _words(item.description)
    jaccard = len(q & t) / len(q | t)
    # Coverage counts a query term as matched by description *or* title;
    # counting description alone would let a title-matched term lower the
    # score, breaking grade monotonicity in added title terms.
    coverage = sum(1 for w in q if w in d or w in t) / len(q)
    return (TITLE_WEIGHT * jaccard
            + CONTENT_WEIGHT * coverage
            + METADATA_WEIGHT * _metadata_bonus(q, item))


def teacher_grade(query: Query, item: JobItem) -> int:
    score = teacher_score(query, item)
    grade = 0
    for cut in GRADE_BUCKETS:
        if score >= cut:
            grade += 1
    return grade


def soft_label(grade: int) -> tuple[float, float]:
    if grade not in SOFT_LABELS:
        raise ValueError(f"grade must be in [0, 4], got {grade!r}")
    p_yes = SOFT_LABELS[grade]
    return p_yes, 1.0 - p_yes


# ---------------------------------------------------------------------------
# prompts


def assemble_prompt(query: Query, item: JobItem) -> PromptSegments:
    remote = "true" if item.remote_eligible else "false"
    return PromptSegments(
        system_prefix=SYSTEM_PREFIX,
        query_text=f"<|q|>{query.text}<|/q|>",
        metadata_text=(f"<|meta|>{item.title}|{item.company}|{item.location}|"
                       f"{item.employment_type}|{remote}<|/meta|>"),
        description_text=f"<|desc|>{item.description}<|/desc|>",
        suffix=SUFFIX,
    )


def truncate_description(segments: PromptSegments, token_budget: int, vocab: Vocab) -> PromptSegments:
    """Trim description word content from the end until the prompt fits.

    All other segments are byte-identical to the input. The <|desc|> tag
    pair is kept while any content remains; at the boundary where no
    description tokens fit, the description segment becomes empty.
    """
    base = (len(encode(segments.system_prefix, vocab))
            + len(encode(segments.query_text, vocab))
            + len(encode(segments.metadata_text, vocab))
            + len(encode(segments.suffix, vocab)))
    if token_budget < base:
        raise PromptBudgetError(
            f"budget {token_budget} below non-description length {base}")
    desc_budget = token_budget - base
    desc_tokens = len(encode(segments.description_text, vocab))
    if desc_tokens <= desc_budget:
        return segments
    if desc_budget < 2:
        return PromptSegments(
            segments.system_prefix, segments.query_text,
            segments.metadata_text, "", segments.suffix)

    content = segments.description_text
    assert content.startswith("<|desc|>") and content.endswith("<|/desc|>")
    content = content[len("<|desc|>"):-len("<|/desc|>")]
    spans = encode_with_spans(content, vocab)
    keep = spans[:desc_budget - 2]
    kept_text = content[:keep[-1][2]] if keep else ""
    return PromptSegments(
        segments.system_prefix, segments.query_text, segments.metadata_text,
        f"<|desc|>{kept_text}<|/desc|>", segments.suffix)


# ---------------------------------------------------------------------------
# candidate sets & serialization


def candidates_for_query(query: Query, items: list[JobItem], per_query: int, seed: int) -> list[JobItem]:
    """Retrieval stand-in: top title-overlap items plus a seeded random fill."""
    q = _words(query.text)
    scored = sorted(
        items,
        key=lambda it: (-len(q & _words(it.title)), it.id),
    )
    n_overlap = min(per_query - per_query // 3, len(items))
    pool = scored[:n_overlap]
    chosen = {it.id for it in pool}
    rng = random.Random(f"{seed}:cand:{query.id}")
    rest = [it for it in items if it.id not in chosen]
    fill = rng.sample(rest, min(per_query - len(pool), len(rest)))
    return sorted(pool + fill, key=lambda it: it.id)


def build_pairs(queries: list[Query], items: list[JobItem], per_query: int, seed: int) -> list[GradedPair]:
    pairs = []
    for query in queries:
        for item in candidates_for_query(query, items, per_query, seed):
            grade = teacher_grade(query, item)
            p_yes, p_no = soft_label(grade)
            pairs.append(GradedPair(query.id, item.id, grade, p_yes, p_no))
    return pairs


def write_ndjson(path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(asdict(rec), ensure_ascii=False) + "\n")


def _read_ndjson(path, cls):
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(cls(**json.loads(line)))
    return out


def read_queries(path) -> list[Query]:
    return _read_ndjson(path, Query)


def read_items(path) -> list[JobItem]:
    return _read_ndjson(path, JobItem)


def read_pairs(path) -> list[GradedPair]:
    return _read_ndjson(path, GradedPair)
