"""gesture_tuples.session"""

import os
import concurrent.futures
from typing import List, Optional, Tuple

from modules import utils
from modules.utils import GestureTuplesMap, GestureTuplesKey
from modules.alphabet import AlphabetConfig
from modules.config import RunConfig
from modules.evaluate import EvalRecord, aggregate, aggregate_by
from modules.pipeline import PipelineConfig, PipelineError, run_stream
from modules.simulator import iter_test_set
from modules.stream import (
    ManifestEntry,
    StreamFormatError,
    read_manifest,
    read_stream,
    write_manifest,
    write_stream,
)

MANIFEST = "manifest.jsonl"
STREAM_FOLDER = "streams"


def _evaluate_entry(job: Tuple[dict, int, dict, str]) -> Tuple[dict, Optional[str]]:
    """Run one manifest entry, faults become a record without events"""

    pipeline_config, num_phonemes, entry, folder = job
    entry = ManifestEntry.from_dict(entry)
    alphabet = AlphabetConfig(num_phonemes)
    try:
        frames = read_stream(entry.resolve(folder), alphabet)
        events = run_stream(
            frames,
            PipelineConfig.from_dict(pipeline_config),
            alphabet,
            logger=utils.create_io_logger("error"),
        )
        warning = None
    except (OSError, StreamFormatError, PipelineError) as err:
        events, warning = [], "{} marked as detector error: {}".format(entry.path, err)
    record = EvalRecord(
        entry.ground_truth, events, group=entry.speed, source=entry.path
    )
    return record.to_dict(), warning


class Session:
    """Wires the simulator, the pipeline and the evaluation for one RunConfig"""

    def __init__(self, config: RunConfig, logger=None):
        self.config = config
        self.logger = logger or utils.IOLogger()

    def stream_name(self, sample):
        return "{:06d}_{}_{}.csv".format(sample.index, sample.ground_truth, sample.speed.name)

    def simulate(self, out_dir: str) -> List[ManifestEntry]:
        """Render the test set into stream files plus a manifest"""

        config = self.config
        entries = []
        samples = iter_test_set(
            config.alphabet.num_phonemes,
            config.tuple_length,
            int(config.get("simulator.samples_per_class")),
            config.speeds,
            config.noise,
            l_hi=float(config.get("simulator.l_hi")),
            l_lo=float(config.get("simulator.l_lo")),
            padding=int(config.get("simulator.padding")),
            post_window=config.pipeline_config.post_window,
            detector_queue_len=config.pipeline_config.detector_queue_len,
        )
        with utils.get_timer().lap("simulate"):
            for sample in samples:
                name = self.stream_name(sample)
                write_stream(
                    sample.frames,
                    os.path.join(out_dir, STREAM_FOLDER, name),
                    config.alphabet,
                )
                entries.append(
                    ManifestEntry(
                        "{}/{}".format(STREAM_FOLDER, name),
                        sample.ground_truth,
                        sample.speed.name,
                        sample.seed,
                    )
                )
        write_manifest(entries, os.path.join(out_dir, MANIFEST))
        self.logger.info(
            "Simulated {} streams (seed {}) into {}".format(len(entries), config.seed, out_dir)
        )
        return entries

    def run_stream(self, path: str):
        frames = read_stream(path, self.config.alphabet)
        with utils.get_timer().lap("stream"):
            events = run_stream(
                frames, self.config.pipeline_config, self.config.alphabet, self.logger
            )
        self.logger.debug(
            utils.block_msg(os.path.basename(path), {"events": [str(e) for e in events]})
        )
        return frames, events

    def run_manifest(self, path: str, workers: Optional[int] = None) -> List[EvalRecord]:
        """Evaluate every stream of a manifest, records keep the manifest order"""

        entries = read_manifest(path)
        folder = os.path.dirname(os.path.abspath(path))
        workers = workers or self.config.workers
        jobs = [
            (
                self.config.pipeline_config.to_dict(),
                self.config.alphabet.num_phonemes,
                e.to_dict(),
                folder,
            )
            for e in entries
        ]
        with utils.get_timer().lap("manifest"):
            if workers > 1 and len(jobs) > 1:
                with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                    results = list(pool.map(_evaluate_entry, jobs, chunksize=16))
            else:
                results = [_evaluate_entry(job) for job in jobs]
        records = []
        for record, warning in results:
            if warning:
                self.logger.warning(warning)
            records.append(EvalRecord.from_dict(record))
        self.logger.info("Evaluated {} streams with {} worker(s)".format(len(records), workers))
        return records

    def report(self, records: List[EvalRecord]):
        reports = {"all": aggregate(records)}
        if len({r.group for r in records}) > 1:
            reports.update(aggregate_by(records))
        return reports


def create_session(config: RunConfig, logger=None) -> Session:
    """Create the session"""

    GestureTuplesMap.set(GestureTuplesKey.SESSION, Session(config, logger=logger))
    return GestureTuplesMap.get(GestureTuplesKey.SESSION)


def get_session() -> Session:
    """Get the global session"""

    return GestureTuplesMap.get(GestureTuplesKey.SESSION)
