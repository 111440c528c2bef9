"""Convert MIT-BIH Arrhythmia records to the one-column CSVs the tests look for.

Needs the optional ``wfdb`` package and network access to PhysioNet::

    pip install wfdb
    python scripts/fetch_mitdb.py tests/data

writes ``mitdb_100_mlii.csv`` and ``mitdb_124_v4.csv`` holding the first
2000 samples of each lead. The database is distributed under the ODC-By
license; the files are not committed to this repository.
"""

import argparse
from pathlib import Path

RECORDS = (("100", "MLII", "mitdb_100_mlii.csv"), ("124", "V4", "mitdb_124_v4.csv"))


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out_dir")
    p.add_argument("--count", type=int, default=2000)
    args = p.parse_args(argv)
    try:
        import wfdb
    except ImportError:
        raise SystemExit("this script needs the 'wfdb' package: pip install wfdb")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for record, lead, name in RECORDS:
        rec = wfdb.rdrecord(record, pn_dir="mitdb", sampto=args.count)
        x = rec.p_signal[:, rec.sig_name.index(lead)]
        with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{lead}\n")
            fh.writelines(f"{v:.6f}\n" for v in x)
        print(out / name)


if __name__ == "__main__":
    main()
