"""Write every named fixture as a Cayley-table file (and the Rees fixtures as specs)."""
import argparse
import logging
import os

from edsem.files import rees_spec_to_dict, write_json
from edsem.fixtures import ALIASES, named_fixture, rs240_spec, rsing_spec

logger = logging.getLogger(__name__)

parser = argparse.ArgumentParser()
parser.add_argument("output_dir", type=str, help="directory for the fixture files.")
parser.add_argument(
    "--skip_large", action="store_true", help="skip fixtures with more than 100 elements."
)


def main() -> None:
    args = parser.parse_args()
    logging.basicConfig(
        format="%(asctime)s - %(levelname)s - %(name)s -   %(message)s",
        datefmt="%m/%d/%Y %H:%M:%S",
        level=logging.INFO,
    )
    names = sorted(ALIASES) + ["triv", "rsing", "a5plus", "rs240"]
    for name in names:
        semigroup = named_fixture(name)
        if args.skip_large and len(semigroup) > 100:
            logger.info(f"Skipping {name} ({len(semigroup)} elements)")
            continue
        write_json(os.path.join(args.output_dir, f"{name}.json"), semigroup.to_dict())
    for name, spec in (("rs240", rs240_spec), ("rsing", rsing_spec)):
        write_json(os.path.join(args.output_dir, f"{name}_rees.json"), rees_spec_to_dict(spec()))


if __name__ == "__main__":
    main()
