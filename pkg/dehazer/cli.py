"""Command-line entry point: ``dehazer <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure. Every
failure prints ``dehazer: <code>: <message>`` as one line on stderr.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable, List, NoReturn, Optional, Sequence

from dehazer import GlobalConfiguration
from dehazer.data import load_image, make_dataset, read_dataset, save_image, save_map, write_dataset
from dehazer.exceptions import BaseError, DataError, UsageError
from dehazer.gradcheck import GROUPS, run_gradcheck_suite
from dehazer.model import TABLE_PRESETS, load_network_config
from dehazer.prior import DcpParams, dcp_dehaze
from dehazer.training import (
    TrainPlan,
    evaluate,
    run_ablation,
    run_augmentation_ablation,
    train,
    write_report,
)
from dehazer.utils.logging import configure_logging, logger

__all__ = ["build_parser", "run_cli", "main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _report(error: BaseError) -> int:
    message = " ".join(str(error).split())
    print(f"dehazer: {error.code}: {message}", file=sys.stderr)
    return error.exit_code


def _dehaze_dcp(args: argparse.Namespace) -> int:
    knobs = {
        "omega": args.omega,
        "patch": args.patch,
        "t_floor": args.t_floor,
        "guided_radius": args.guided_radius,
    }
    params = DcpParams.checked(**{key: value for key, value in knobs.items() if value is not None})
    radiance, transmission = dcp_dehaze(load_image(args.input), params)
    save_image(radiance, args.out)
    if args.t_out is not None:
        save_map(transmission, args.t_out)
    return 0


def _synth(args: argparse.Namespace) -> int:
    dataset = make_dataset(args.train, args.val, (args.size, args.size), seed=args.seed)
    write_dataset(args.out, dataset)
    print(f"wrote {len(dataset.train)} train and {len(dataset.val)} val pairs to {args.out}")
    return 0


def _plan(args: argparse.Namespace, **extra) -> TrainPlan:
    knobs = {"iterations": args.iters, "batch": args.batch, "seed": args.seed, **extra}
    if getattr(args, "lr", None) is not None:
        knobs.update(lr_g=args.lr, lr_d=args.lr)
    return TrainPlan.checked(**{key: value for key, value in knobs.items() if value is not None})


def _train(args: argparse.Namespace) -> int:
    plan = _plan(args, config=load_network_config(args.config))
    report = train(plan, read_dataset(args.data), checkpoint=args.out)
    if args.report is not None:
        write_report(report, args.report)
    print(f"{report.config_name}: rec loss {report.rec_trace[0]:.5f} -> {report.rec_trace[-1]:.5f}")
    return 0


def _eval(args: argparse.Namespace) -> int:
    dataset = read_dataset(args.data)
    record = evaluate(args.ckpt, dataset.split(args.split), dataset_tag=args.split)
    if args.report is not None:
        write_report(record, args.report)
    print(f"{record.config_name}: PSNR {record.mean_psnr:.2f} dB, SSIM {record.mean_ssim:.4f}")
    return 0


def _ablate(args: argparse.Namespace) -> int:
    dataset = read_dataset(args.data)
    plan = _plan(args)
    if args.augmentations:
        table = run_augmentation_ablation(args.preset, plan, dataset)
    else:
        table = run_ablation(args.presets or TABLE_PRESETS, plan, dataset)
    write_report(table, args.report)
    print(table.format_table())
    return 0


def _gradcheck(args: argparse.Namespace) -> int:
    summary = run_gradcheck_suite(args.group, seed=args.seed)
    print(f"gradcheck: {summary.passed}/{len(summary.results)} passed")
    summary.raise_for_failures()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dehazer", description="Dark-channel guided dehazing toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG instead of INFO")
    parser.add_argument(
        "--scale",
        choices=("toy", "full"),
        default=None,
        help="default network width, depth and guided-filter radius (default: toy)",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    commands.required = True

    dcp = commands.add_parser("dehaze-dcp", help="classical dark-channel dehazing of one image")
    dcp.add_argument("--in", dest="input", required=True, help="hazy input image (.ppm or .png)")
    dcp.add_argument("--out", required=True, help="dehazed output image")
    dcp.add_argument("--t-out", help="write the refined transmission map here")
    dcp.add_argument("--omega", type=float, help="haze retention factor in (0, 1] (default 0.95)")
    dcp.add_argument("--patch", type=int, help="odd dark-channel patch size (default 15)")
    dcp.add_argument("--t-floor", type=float, help="transmission floor in (0, 1) (default 0.1)")
    dcp.add_argument("--guided-radius", type=int, help="guided filter radius (default by scale)")
    dcp.set_defaults(handler=_dehaze_dcp)

    synth = commands.add_parser("synth", help="write a seeded synthetic hazy dataset")
    synth.add_argument("--out", required=True, help="dataset directory")
    synth.add_argument("--train", type=int, default=32, help="training pairs (default 32)")
    synth.add_argument("--val", type=int, default=8, help="validation pairs (default 8)")
    synth.add_argument("--size", type=int, default=48, help="square image extent (default 48)")
    synth.add_argument("--seed", type=int, default=0, help="dataset seed (default 0)")
    synth.set_defaults(handler=_synth)

    fit = commands.add_parser("train", help="train one network configuration")
    fit.add_argument("--data", required=True, help="dataset directory written by synth")
    fit.add_argument("--config", default="EDN-GTM", help="preset name or configuration file")
    fit.add_argument("--out", required=True, help="checkpoint path")
    fit.add_argument("--iters", type=int, help="training iterations (default 200)")
    fit.add_argument("--batch", type=int, help="pairs per iteration (default 2)")
    fit.add_argument("--seed", type=int, help="training seed (default 0)")
    fit.add_argument("--lr", type=float, help="Adam learning rate for both networks (default 1e-4)")
    fit.add_argument("--report", help="write the training report (JSON) here")
    fit.set_defaults(handler=_train)

    score = commands.add_parser("eval", help="score a checkpoint on a dataset split")
    score.add_argument("--ckpt", required=True, help="checkpoint written by train")
    score.add_argument("--data", required=True, help="dataset directory written by synth")
    score.add_argument("--split", choices=("train", "val"), default="val", help="split to score (default val)")
    score.add_argument("--report", help="write the metrics record (JSON) here")
    score.set_defaults(handler=_eval)

    ablate = commands.add_parser("ablate", help="train and score several configurations")
    ablate.add_argument("--data", required=True, help="dataset directory written by synth")
    ablate.add_argument("--report", required=True, help="write the ablation table (JSON) here")
    ablate.add_argument("--iters", type=int, help="training iterations per row (default 200)")
    ablate.add_argument("--batch", type=int, help="pairs per iteration (default 2)")
    ablate.add_argument("--seed", type=int, help="training seed shared by every row (default 0)")
    ablate.add_argument(
        "--presets",
        nargs="+",
        metavar="NAME",
        help="presets to compare (default: the six table presets)",
    )
    ablate.add_argument(
        "--augmentations",
        action="store_true",
        help="compare augmentation settings for one preset instead of presets",
    )
    ablate.add_argument("--preset", default="EDN-GTM", help="preset for --augmentations (default EDN-GTM)")
    ablate.set_defaults(handler=_ablate)

    check = commands.add_parser("gradcheck", help="run the finite-difference gradient suite")
    check.add_argument(
        "--group",
        action="append",
        choices=GROUPS,
        help="restrict to a case group; repeatable (default: all groups)",
    )
    check.add_argument("--seed", type=int, default=0, help="probe seed (default 0)")
    check.set_defaults(handler=_gradcheck)

    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except UsageError as e:
        return _report(e)

    configure_logging(args.verbose)
    if args.scale is not None:
        GlobalConfiguration.SCALE = args.scale
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except BaseError as e:
        return _report(e)
    except OSError as e:
        return _report(DataError(str(e)))
    finally:
        logger.debug("%s finished", args.command)


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run_cli(argv))
