"""JSON-lines dataset format: loading, saving, and manifests.

File layout (schema_version 1), one JSON object per line:

  manifest  {"schema_version": 1, "captured_at": ISO, "repo_count": N,
             "source": "file" | "live_api"}         -- first line, written on
                                                        save, optional on load
  repo      {"repo_id", "full_name", "created_at", "primary_language",
             "size_kb", "owner_followers", "forks_total", "stars_total",
             "watchers_total", "follower_ids"}
  event     {"repo_id", "kind", "occurred_at", "delta"}  -- delta may be
                                                            omitted (defaults
                                                            to +1)

Timestamps are ISO-8601 UTC ("...Z"). Saving is canonical and deterministic:
repos sort by repo_id, events by (occurred_at, repo_id, kind), keys keep the
documented order, so saving the same corpus twice is byte-identical and
save -> load is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .errors import DuplicateRepoId, EventBeforeCreation, ParseError
from .model import Corpus, EventKind, PopularityEvent, RepoRecord, grid_for_times

SCHEMA_VERSION = 1

_REPO_KEYS = (
    "repo_id", "full_name", "created_at", "primary_language", "size_kb",
    "owner_followers", "forks_total", "stars_total", "watchers_total",
    "follower_ids",
)
_EVENT_KEYS = ("repo_id", "kind", "occurred_at", "delta")
_MANIFEST_KEYS = ("schema_version", "captured_at", "repo_count", "source")


class DatasetSource(Enum):
    FILE = "file"
    LIVE_API = "live_api"


@dataclass(frozen=True, slots=True)
class DatasetManifest:
    """Header describing a saved dataset file."""

    schema_version: int
    captured_at: int
    repo_count: int
    source: DatasetSource


def parse_timestamp(text: str) -> int:
    """Parse an ISO-8601 timestamp to UTC epoch seconds.

    Accepts a trailing "Z" or an explicit offset; a naive timestamp is read
    as UTC.
    """
    if not isinstance(text, str):
        raise ValueError(f"timestamp must be a string, got {type(text).__name__}")
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    moment = datetime.fromisoformat(raw)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return int(moment.timestamp())


def format_timestamp(ts: int) -> str:
    """Render UTC epoch seconds as canonical ISO-8601 ("...Z")."""
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _require_int(obj: dict, key: str, line_no: int) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(line_no, f"{key} must be an integer, got {value!r}")
    return value


def _require_str(obj: dict, key: str, line_no: int) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise ParseError(line_no, f"{key} must be a string, got {value!r}")
    return value


def _check_keys(obj: dict, expected: tuple[str, ...], optional: frozenset[str],
                line_no: int, what: str) -> None:
    keys = set(obj)
    missing = set(expected) - optional - keys
    if missing:
        raise ParseError(line_no, f"{what} line missing keys: {sorted(missing)}")
    extra = keys - set(expected)
    if extra:
        raise ParseError(line_no, f"{what} line has unknown keys: {sorted(extra)}")


def _parse_repo(obj: dict, line_no: int) -> RepoRecord:
    _check_keys(obj, _REPO_KEYS, frozenset(), line_no, "repository")
    language = obj["primary_language"]
    if language is not None and not isinstance(language, str):
        raise ParseError(line_no, "primary_language must be a string or null")
    follower_ids = obj["follower_ids"]
    if not isinstance(follower_ids, list) or not all(
        isinstance(f, str) for f in follower_ids
    ):
        raise ParseError(line_no, "follower_ids must be a list of strings")
    try:
        return RepoRecord(
            repo_id=_require_str(obj, "repo_id", line_no),
            full_name=_require_str(obj, "full_name", line_no),
            created_at=parse_timestamp(obj["created_at"]),
            primary_language=language,
            size_kb=_require_int(obj, "size_kb", line_no),
            owner_followers=_require_int(obj, "owner_followers", line_no),
            forks_total=_require_int(obj, "forks_total", line_no),
            stars_total=_require_int(obj, "stars_total", line_no),
            watchers_total=_require_int(obj, "watchers_total", line_no),
            follower_ids=tuple(follower_ids),
        )
    except ValueError as exc:
        raise ParseError(line_no, str(exc)) from exc


def _parse_event(obj: dict, line_no: int) -> PopularityEvent:
    _check_keys(obj, _EVENT_KEYS, frozenset({"delta"}), line_no, "event")
    kind_text = _require_str(obj, "kind", line_no)
    try:
        kind = EventKind(kind_text)
    except ValueError:
        raise ParseError(line_no, f"unknown event kind {kind_text!r}") from None
    delta = _require_int(obj, "delta", line_no) if "delta" in obj else 1
    try:
        return PopularityEvent(
            repo_id=_require_str(obj, "repo_id", line_no),
            kind=kind,
            occurred_at=parse_timestamp(obj["occurred_at"]),
            delta=delta,
        )
    except ValueError as exc:
        raise ParseError(line_no, str(exc)) from exc


def _parse_manifest(obj: dict, line_no: int) -> DatasetManifest:
    if line_no != 1:
        raise ParseError(line_no, "manifest line allowed only as line 1")
    _check_keys(obj, _MANIFEST_KEYS, frozenset(), line_no, "manifest")
    version = _require_int(obj, "schema_version", line_no)
    if version != SCHEMA_VERSION:
        raise ParseError(line_no, f"unsupported schema_version {version}")
    source_text = _require_str(obj, "source", line_no)
    try:
        source = DatasetSource(source_text)
    except ValueError:
        raise ParseError(line_no, f"unknown source {source_text!r}") from None
    return DatasetManifest(
        schema_version=version,
        captured_at=parse_timestamp(obj["captured_at"]),
        repo_count=_require_int(obj, "repo_count", line_no),
        source=source,
    )


def load_corpus(path: str | Path, interval_days: int = 30) -> Corpus:
    """Load a JSON-lines dataset into a validated corpus.

    The grid is derived from the events via the minimal-cover rule; a file
    whose repositories have no events seeds the grid with creation times.

    Raises:
        ParseError: malformed line, unknown/missing keys, empty file, event
            referencing an unknown repository, or a manifest mismatch -- all
            reported with 1-based line numbers.
        DuplicateRepoId: two repository lines share a repo_id.
        EventBeforeCreation: an event predates its repository's creation.
    """
    path = Path(path)
    manifest: DatasetManifest | None = None
    repos: list[RepoRecord] = []
    events: list[tuple[int, PopularityEvent]] = []
    seen_lines = 0
    with path.open("r", encoding="utf-8", newline="") as handle:
        for line_no, raw in enumerate(handle, start=1):
            seen_lines += 1
            text = raw.strip()
            if not text:
                raise ParseError(line_no, "blank line")
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(line_no, "line is not a JSON object")
            if "schema_version" in obj:
                manifest = _parse_manifest(obj, line_no)
            elif "kind" in obj:
                events.append((line_no, _parse_event(obj, line_no)))
            elif "full_name" in obj:
                repos.append(_parse_repo(obj, line_no))
            else:
                raise ParseError(line_no, "unrecognized line type")
    if seen_lines == 0:
        raise ParseError(1, "empty dataset file")
    if not repos:
        raise ParseError(seen_lines, "dataset contains no repository lines")

    by_id = {}
    for record in repos:
        if record.repo_id in by_id:
            raise DuplicateRepoId(f"duplicate repo_id {record.repo_id!r}")
        by_id[record.repo_id] = record
    for line_no, event in events:
        record = by_id.get(event.repo_id)
        if record is None:
            raise ParseError(line_no, f"event references unknown repo_id {event.repo_id!r}")
        if event.occurred_at < record.created_at:
            raise EventBeforeCreation(
                f"line {line_no}: event at {format_timestamp(event.occurred_at)} "
                f"predates creation of {event.repo_id!r}"
            )
    if manifest is not None and manifest.repo_count != len(repos):
        raise ParseError(
            1, f"manifest repo_count {manifest.repo_count} != {len(repos)} repository lines"
        )

    event_list = [e for _, e in events]
    times = [e.occurred_at for e in event_list]
    if not times:
        times = [r.created_at for r in repos]
    grid = grid_for_times(times, interval_days)
    return Corpus(
        repos=tuple(repos),
        events=tuple(event_list),
        grid=grid,
        captured_at=manifest.captured_at if manifest else None,
    )


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def save_corpus(
    corpus: Corpus,
    path: str | Path,
    source: DatasetSource = DatasetSource.FILE,
) -> DatasetManifest:
    """Write a corpus to the canonical JSON-lines format.

    The manifest timestamp comes from the corpus, never the wall clock, so
    re-saving an unchanged corpus is byte-identical.
    """
    path = Path(path)
    assert corpus.captured_at is not None
    manifest = DatasetManifest(
        schema_version=SCHEMA_VERSION,
        captured_at=corpus.captured_at,
        repo_count=len(corpus.repos),
        source=source,
    )
    lines = [
        _dump(
            {
                "schema_version": manifest.schema_version,
                "captured_at": format_timestamp(manifest.captured_at),
                "repo_count": manifest.repo_count,
                "source": manifest.source.value,
            }
        )
    ]
    for r in corpus.repos:
        lines.append(
            _dump(
                {
                    "repo_id": r.repo_id,
                    "full_name": r.full_name,
                    "created_at": format_timestamp(r.created_at),
                    "primary_language": r.primary_language,
                    "size_kb": r.size_kb,
                    "owner_followers": r.owner_followers,
                    "forks_total": r.forks_total,
                    "stars_total": r.stars_total,
                    "watchers_total": r.watchers_total,
                    "follower_ids": list(r.follower_ids),
                }
            )
        )
    for e in corpus.events:
        lines.append(
            _dump(
                {
                    "repo_id": e.repo_id,
                    "kind": e.kind.value,
                    "occurred_at": format_timestamp(e.occurred_at),
                    "delta": e.delta,
                }
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    return manifest
