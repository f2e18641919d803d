"""
`generate` verb.
Writes a seeded instance file of one of the supported kinds.
"""

import argparse

from infobound.config import settings
from infobound.middleware import handle_command_errors, log_command
from infobound.models.request import GenerateKind, GenerateParams
from infobound.services.instance_service import instance_service


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="Generate an instance file")
    parser.add_argument("kind", choices=[kind.value for kind in GenerateKind])
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--states", type=int, default=2, help="Coding states (random, uc-approx)")
    parser.add_argument("--kraus", type=int, default=2, help="Kraus operators (random)")
    parser.add_argument("--groups", type=int, default=1, help="Observed groups (random)")
    parser.add_argument("--samples", type=int, default=settings.UC_SAMPLES, help="Haar samples (uc-approx)")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--prior", default=None, help="Comma-separated prior (classical kinds)")
    parser.add_argument("--kernel", default=None,
                        help='Channel kernel: "bsc:<p>", "erasure:<e>", "identity" or rows "a,b;c,d"')
    parser.add_argument("--seed-op", dest="seed_op", choices=["projector", "random"], default="projector")
    parser.add_argument("--out", default=None, help="Write the instance here instead of stdout")
    parser.set_defaults(handler=run)


@handle_command_errors
@log_command("generate")
def run(args: argparse.Namespace) -> int:
    params = GenerateParams(
        kind=GenerateKind(args.kind),
        dim=args.dim,
        n_states=args.states,
        n_kraus=args.kraus,
        n_groups=args.groups,
        samples=args.samples,
        seed=args.seed,
        prior=[float(x) for x in args.prior.split(",")] if args.prior else None,
        kernel=args.kernel,
        seed_op=args.seed_op,
    )
    instance = instance_service.generate(params)
    text = instance_service.save(instance, args.out)
    if not args.out:
        print(text)
    return 0
