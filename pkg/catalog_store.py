"""
CatalogStore — on-disk artifacts of compact3 runs.

Layout under the output directory:
  datasets/      tuple lists (snec, rnec, K)          JSONL / CSV
  catalogs/      intercept catalogs + summaries        JSONL / CSV / JSON
  certificates/  exact-value certificates              JSON
  packings/      circle placements                     JSON
  figures/       rendered packings                     SVG
  ledgers/       ambiguity resolutions and disputes    JSONL
  runs/          run manifests and error records       JSON

Primary artifacts carry no timestamps, so repeated runs are byte-identical;
only run manifests are stamped.
"""

import csv
import json
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, List, Optional

from loguru import logger

from errors import UsageError

_SUBDIRS = ["datasets", "catalogs", "certificates", "packings", "figures", "ledgers", "runs"]

CATALOG_FIELDS = ["eta", "zeta", "status", "r", "s", "digits", "margin"]


def _tuple_text(xi) -> str:
    return " ".join(str(v) for v in xi)


def _tuple_parse(text: str) -> list:
    return [int(v) for v in text.split()]


class CatalogStore:
    def __init__(self, base_dir: str):
        self.base = Path(base_dir)
        for d in _SUBDIRS:
            (self.base / d).mkdir(parents=True, exist_ok=True)

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------

    def _now(self) -> str:
        return datetime.now(timezone.utc).isoformat()

    def _read_json(self, path: Path, default):
        if not path.exists():
            return default
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, OSError):
            return default

    def _write_json(self, path: Path, data) -> Path:
        path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return path

    def _append_jsonl(self, path: Path, record: dict) -> None:
        with path.open("a", encoding="utf-8") as f:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")

    def _write_jsonl(self, path: Path, records: Iterable[dict]) -> Path:
        with path.open("w", encoding="utf-8") as f:
            for record in records:
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
        return path

    def _read_jsonl(self, path: Path) -> list:
        if not path.exists():
            return []
        records = []
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError:
                    logger.warning("[Store] skipping unreadable line in {}", path.name)
        return records

    # ------------------------------------------------------------------
    # Datasets  (tuple lists)
    # ------------------------------------------------------------------

    def write_tuples(self, name: str, tuples: List[tuple], fmt: str = "json") -> Path:
        if fmt == "csv":
            path = self.base / "datasets" / f"{name}.csv"
            with path.open("w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f)
                writer.writerow([f"x{i}" for i in range(1, 7)])
                writer.writerows(tuples)
        else:
            path = self._write_jsonl(self.base / "datasets" / f"{name}.jsonl",
                                     ({"xi": list(t)} for t in tuples))
        logger.info("[Store/Dataset] +{}: {} tuples", path.name, len(tuples))
        return path

    def write_pairs(self, name: str, pairs: List[tuple], fmt: str = "json") -> Path:
        if fmt == "csv":
            path = self.base / "datasets" / f"{name}.csv"
            with path.open("w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(["eta", "zeta"])
                for eta, zeta in pairs:
                    writer.writerow([_tuple_text(eta), _tuple_text(zeta)])
        else:
            path = self._write_jsonl(self.base / "datasets" / f"{name}.jsonl",
                                     ({"eta": list(e), "zeta": list(z)} for e, z in pairs))
        logger.info("[Store/Dataset] +{}: {} pairs", path.name, len(pairs))
        return path

    def read_pairs(self, path: str) -> List[tuple]:
        p = Path(path)
        if p.suffix == ".csv":
            with p.open(encoding="utf-8", newline="") as f:
                return [(tuple(_tuple_parse(row["eta"])), tuple(_tuple_parse(row["zeta"])))
                        for row in csv.DictReader(f)]
        return [(tuple(r["eta"]), tuple(r["zeta"])) for r in self._read_jsonl(p)]

    # ------------------------------------------------------------------
    # Catalogs  (intercept results)
    # ------------------------------------------------------------------

    def write_catalog(self, name: str, records: List[dict], fmt: str = "json") -> Path:
        if fmt == "csv":
            path = self.base / "catalogs" / f"{name}.csv"
            with path.open("w", encoding="utf-8", newline="") as f:
                writer = csv.DictWriter(f, fieldnames=CATALOG_FIELDS, extrasaction="ignore")
                writer.writeheader()
                for rec in records:
                    row = dict(rec)
                    row["eta"] = _tuple_text(rec["eta"])
                    row["zeta"] = _tuple_text(rec["zeta"])
                    writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
        else:
            path = self._write_jsonl(self.base / "catalogs" / f"{name}.jsonl", records)
        logger.info("[Store/Catalog] +{}: {} rows", path.name, len(records))
        return path

    def read_catalog(self, path: str) -> List[dict]:
        p = Path(path)
        if p.suffix != ".csv":
            return self._read_jsonl(p)
        out = []
        with p.open(encoding="utf-8", newline="") as f:
            for row in csv.DictReader(f):
                rec = {k: (v if v != "" else None) for k, v in row.items()}
                rec["eta"] = _tuple_parse(row["eta"])
                rec["zeta"] = _tuple_parse(row["zeta"])
                rec["digits"] = int(row["digits"])
                out.append(rec)
        return out

    def write_summary(self, name: str, summary: dict) -> Path:
        return self._write_json(self.base / "catalogs" / f"{name}.summary.json", summary)

    # ------------------------------------------------------------------
    # Certificates, packings, figures
    # ------------------------------------------------------------------

    def write_certificate(self, eta, zeta, record: dict) -> Path:
        name = f"cert_{'-'.join(map(str, eta))}_{'-'.join(map(str, zeta))}.json"
        path = self._write_json(self.base / "certificates" / name, record)
        logger.info("[Store/Certificate] +{}", name)
        return path

    def write_record(self, subdir: str, name: str, record: dict) -> Path:
        return self._write_json(self.base / subdir / f"{name}.json", record)

    def read_record(self, path: str) -> dict:
        data = self._read_json(Path(path), None)
        if data is None:
            raise UsageError(f"cannot read JSON record from {path}")
        return data

    def write_packing(self, name: str, record: dict) -> Path:
        path = self._write_json(self.base / "packings" / f"{name}.json", record)
        logger.info("[Store/Packing] +{}: {} circles", path.name, len(record.get("circles", [])))
        return path

    def write_svg(self, name: str, svg: str) -> Path:
        path = self.base / "figures" / f"{name}.svg"
        path.write_text(svg + "\n", encoding="utf-8")
        logger.info("[Store/Figure] +{}", path.name)
        return path

    # ------------------------------------------------------------------
    # Ledger  (ambiguity resolutions and disputes)
    # ------------------------------------------------------------------

    def append_ledger(self, action: str, eta, zeta, detail: dict) -> str:
        entry_id = str(uuid.uuid4())[:8]
        record = {"id": entry_id, "action": action, "eta": list(eta), "zeta": list(zeta), **detail}
        self._append_jsonl(self.base / "ledgers" / "ambiguous.jsonl", record)
        logger.info("[Store/Ledger] {} {}: {} {}", entry_id, action, tuple(eta), tuple(zeta))
        return entry_id

    def read_ledger(self, action: Optional[str] = None) -> list:
        records = self._read_jsonl(self.base / "ledgers" / "ambiguous.jsonl")
        if action is not None:
            records = [r for r in records if r.get("action") == action]
        return records

    # ------------------------------------------------------------------
    # Runs
    # ------------------------------------------------------------------

    def init_run(self, run_id: str, command: str, config: dict) -> None:
        self._write_json(self.base / "runs" / f"{run_id}.json", {
            "run_id": run_id,
            "command": command,
            "config": config,
            "created": self._now(),
            "artifacts": [],
        })

    def finish_run(self, run_id: str, artifacts: List[str], result: dict) -> None:
        path = self.base / "runs" / f"{run_id}.json"
        data = self._read_json(path, {"run_id": run_id})
        data["artifacts"] = [str(a) for a in artifacts]
        data["result"] = result
        data["finished"] = self._now()
        self._write_json(path, data)

    def write_error(self, run_id: str, command: str, exc: Exception, exit_code: int) -> Path:
        return self._write_json(self.base / "runs" / f"{run_id}.error.json", {
            "error": type(exc).__name__,
            "message": str(exc),
            "exit_code": exit_code,
            "command": command,
        })

    # ------------------------------------------------------------------
    # Summary
    # ------------------------------------------------------------------

    def summary(self) -> str:
        counts = {d: sum(1 for _ in (self.base / d).iterdir()) for d in _SUBDIRS}
        ledger = len(self.read_ledger())
        return (
            f"Store: {counts['datasets']} datasets | {counts['catalogs']} catalogs | "
            f"{counts['certificates']} certificates | {counts['packings']} packings | "
            f"{counts['figures']} figures | {ledger} ledger entries | {counts['runs']} run files"
        )
