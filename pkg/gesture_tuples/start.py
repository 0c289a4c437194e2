import os
import sys
import argparse

from dotenv import load_dotenv, find_dotenv

from modules import utils
from modules.alphabet import AlphabetError, EnumerationCapError, enumerate_tuples, tuple_count
from modules.config import DEFAULT_CONFIG, ConfigError, RunConfig, preset_thresholds
from modules.decoder import DecoderError, decode_nbest
from modules.evaluate import EmptyEvaluationError, format_table
from modules.plot import plot_png, text_chart
from modules.pipeline import PipelineError
from modules.session import MANIFEST, create_session
from modules.simulator import InfeasibleBudgetError, SimulationError
from modules.stream import StreamFormatError, read_matrix, read_stream

PHONEME_NAMES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "phonemes.json")

# flag -> config key, flags left as None keep the config value
OVERRIDES = {
    "m": "alphabet.m",
    "s": "alphabet.s",
    "k": "decoder.k",
    "delta": "decoder.delta",
    "gamma": "decoder.gamma",
    "post_window": "pipeline.post_window",
    "detector_queue": "pipeline.detector_queue",
    "sog_threshold": "pipeline.sog_threshold",
    "eog_threshold": "pipeline.eog_threshold",
    "sigma": "simulator.sigma",
    "blend": "simulator.blend",
    "samples_per_class": "simulator.samples_per_class",
    "speeds": "simulator.speeds",
    "seed": "seed",
    "workers": "workers",
    "out": "out",
}


def get_overrides(args):
    overrides = {}
    if getattr(args, "detector_preset", None):
        overrides["pipeline"] = preset_thresholds(args.detector_preset)
    for attr, key in OVERRIDES.items():
        value = getattr(args, attr, None)
        if value is None:
            continue
        section = overrides
        parts = key.split(".")
        for part in parts[:-1]:
            section = section.setdefault(part, {})
        section[parts[-1]] = value
    return overrides


def get_logger(args):
    if args.log:
        return utils.create_file_logger(args.log, args.verbose)
    return utils.create_io_logger(args.verbose)


def phoneme_names():
    names = utils.load_dict(PHONEME_NAMES) if os.path.isfile(PHONEME_NAMES) else {}
    return {int(k): v for k, v in names.items()}


def cmd_tuples(config, args, logger):
    m, s = config.alphabet.num_phonemes, config.tuple_length
    if not args.list:
        print(tuple_count(m, s))
        return 0
    names = phoneme_names()
    for idx, t in enumerate(enumerate_tuples(m, s)):
        line = "{}\t{}".format(idx, t)
        if all(p in names for p in t):
            line += "\t" + " > ".join(names[p] for p in t)
        print(line)
    return 0


def cmd_decode(config, args, logger):
    matrix = read_matrix(args.input)
    logger.debug(
        "Decode {} columns x {} classes with {}".format(
            matrix.length, matrix.num_classes, config.decoder_params
        )
    )
    for path in decode_nbest(matrix, config.decoder_params, top_n=args.nbest):
        print(path)
    return 0


def cmd_simulate(config, args, logger):
    out = config.out
    session = create_session(config, logger=logger)
    entries = session.simulate(out)
    utils.save_dict(config.to_dict(), os.path.join(out, "config.json"))
    print("streams={} seed={} manifest={}".format(len(entries), config.seed, os.path.join(out, MANIFEST)))
    return 0


def cmd_run(config, args, logger):
    session = create_session(config, logger=logger)
    if args.input.endswith(".csv"):
        frames, events = session.run_stream(args.input)
        for event in events:
            print(event)
        if args.plot:
            _plot(config, args, frames, events, os.path.basename(args.input))
        return 0
    records = session.run_manifest(args.input)
    reports = session.report(records)
    print(format_table(reports))
    out = args.out or os.path.dirname(os.path.abspath(args.input))
    report = {
        "report": reports["all"].to_dict(),
        "groups": {k: r.to_dict() for k, r in reports.items() if k != "all"},
    }
    utils.save_dict(report, os.path.join(out, "report.json"))
    utils.save_dict(config.to_dict(), os.path.join(out, "run_config.json"))
    utils.save_records((r.to_dict() for r in records), os.path.join(out, "records.jsonl"))
    logger.info(utils.block_msg("run summary", {"laps": utils.get_timer().get_laps()}))
    if args.plot:
        folder = os.path.dirname(os.path.abspath(args.input))
        for record in records:
            try:
                frames = read_stream(os.path.join(folder, record.source), config.alphabet)
            except (OSError, StreamFormatError):
                continue
            _plot(config, args, frames, record.events, os.path.basename(record.source), out)
    return 0


def _positive_int(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("should be >= 1, get {}".format(value))
    return number


def _plot(config, args, frames, events, name, out=None):
    post_window = config.pipeline_config.post_window
    if args.plot == "text":
        print(utils.split_line(name))
        print(text_chart(frames, events, config.alphabet, post_window))
        return
    folder = os.path.join(out or config.out, "plots")
    plot_png(
        frames,
        events,
        os.path.join(folder, os.path.splitext(name)[0] + ".png"),
        config.alphabet,
        post_window,
        title=name,
    )


def add_config_args(parser):
    parser.add_argument("--config", type=str, default=None, help="The run config file (json)")
    parser.add_argument("--m", type=int, default=None, help="Number of phonemes")
    parser.add_argument("--s", type=int, default=None, help="Number of phonemes per tuple")
    parser.add_argument("--seed", type=int, default=None, help="Seed of every random choice")
    parser.add_argument("--out", type=str, default=None, help="Output folder")
    parser.add_argument("--verbose", type=str, default="info", help="The verbose level")
    parser.add_argument("--log", type=str, default="", help="Path of the log file")


def add_decoder_args(parser):
    parser.add_argument("--k", type=int, default=None, help="Allowed transitions, default s-1")
    parser.add_argument("--delta", type=float, default=None, help="Transition cost")
    parser.add_argument("--gamma", type=int, default=None, help="Beam limit")


def add_pipeline_args(parser):
    add_decoder_args(parser)
    parser.add_argument("--post-window", type=int, default=None, help="Averaging window")
    parser.add_argument("--detector-queue", type=int, default=None, help="Detector queue length")
    parser.add_argument("--sog-threshold", type=float, default=None, help="SoG threshold")
    parser.add_argument("--eog-threshold", type=float, default=None, help="EoG threshold")
    parser.add_argument(
        "--detector-preset", choices=["2d", "3d"], default=None, help="Thresholds 5 (2d) or 6 (3d)"
    )
    parser.add_argument("--workers", type=int, default=None, help="Parallel stream workers")


def build_parser():
    parser = argparse.ArgumentParser(description="console for scaled gesture tuples")
    commands = parser.add_subparsers(dest="command", required=True)

    tuples = commands.add_parser("tuples", help="Count or list the tuple space")
    add_config_args(tuples)
    tuples.add_argument("--list", action="store_true", help="List every tuple with its index")

    decode = commands.add_parser("decode", help="Decode a stored score matrix")
    add_config_args(decode)
    add_decoder_args(decode)
    decode.add_argument("input", type=str, help="Matrix file, one softmaxed column per row")
    decode.add_argument("--nbest", type=_positive_int, default=1, help="Number of paths to print")

    simulate = commands.add_parser("simulate", help="Simulate a labeled test set")
    add_config_args(simulate)
    add_pipeline_args(simulate)
    simulate.add_argument("--sigma", type=float, default=None, help="Logit noise sigma")
    simulate.add_argument("--blend", type=int, default=None, help="Cross-fade width in frames")
    simulate.add_argument("--samples-per-class", type=int, default=None, help="Streams per tuple")
    simulate.add_argument("--speeds", nargs="+", default=None, help="Speed presets to cycle")

    run = commands.add_parser("run", help="Run the pipeline on a stream or a manifest")
    add_config_args(run)
    add_pipeline_args(run)
    run.add_argument("input", type=str, help="Stream csv or manifest jsonl")
    run.add_argument("--plot", choices=["png", "text"], default=None, help="Draw timelines")
    return parser


COMMANDS = {
    "tuples": cmd_tuples,
    "decode": cmd_decode,
    "simulate": cmd_simulate,
    "run": cmd_run,
}


def main(argv=None):
    load_dotenv(find_dotenv(usecwd=True))
    parser = build_parser()
    args = parser.parse_args(argv)
    utils.set_timer()
    try:
        config = RunConfig.load(
            args.config or os.environ.get("GESTURE_TUPLES_CONFIG"),
            get_overrides(args),
            defaults=DEFAULT_CONFIG,
        )
    except (ConfigError, AlphabetError, ValueError, TypeError) as err:
        parser.error(str(err))
    logger = get_logger(args)
    logger.debug(utils.block_msg("config", config.abstract()))
    try:
        return COMMANDS[args.command](config, args, logger)
    except (
        DecoderError,
        StreamFormatError,
        EnumerationCapError,
        InfeasibleBudgetError,
        SimulationError,
        PipelineError,
        EmptyEvaluationError,
        OSError,
    ) as err:
        logger.error(str(err))
        print("error: {}".format(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
