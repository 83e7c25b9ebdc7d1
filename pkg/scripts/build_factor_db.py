"""Regenerate the bundled repunit factor table.

Development tool only: needs python-flint, which the package itself does
not import.  Each number is given a bounded full-factorization attempt in a
child process; on timeout the smooth part is extracted and the remainder is
written as a ``C`` cofactor.

    python scripts/build_factor_db.py > src/sigma235/data/repunit_factors.txt
"""

from __future__ import annotations

import argparse
import multiprocessing as mp
import sys
import time

import flint

# Complete factorizations matter only where x may have two distinct primes,
# i.e. log x < 249.5: base-2 exponents up to 359, base-3 up to 227 and base-5
# up to 155.  Above that the survey only asks whether x is a prime power,
# which needs no factoring.
RANGES = {2: 359, 3: 227, 5: 155}
SMALL = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def wanted(base: int, e: int) -> bool:
    if e <= SMALL:
        return True
    if is_prime(e):
        return True
    r = int(round(e**0.5))
    return r * r == e and is_prime(r)


def _full(n: int, out: mp.Queue) -> None:
    out.put([(int(p), int(k)) for p, k in flint.fmpz(n).factor()])


def factor_bounded(n: int, timeout: float) -> tuple[list[tuple[int, int]], int | None]:
    q: mp.Queue = mp.Queue()
    proc = mp.Process(target=_full, args=(n, q))
    proc.start()
    proc.join(timeout)
    if proc.is_alive():
        proc.terminate()
        proc.join()
        parts = [(int(p), int(k)) for p, k in flint.fmpz(n).factor_smooth(bits=80)]
        primes, cof = [], 1
        for p, k in parts:
            if flint.fmpz(p).is_probable_prime():
                primes.append((p, k))
            else:
                cof *= p**k
        return primes, (cof if cof > 1 else None)
    return q.get(), None


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--timeout", type=float, default=120.0)
    ap.add_argument("--resume", default=None, help="'<base> <exp>': start at this entry, no header")
    args = ap.parse_args()
    start = tuple(int(t) for t in args.resume.split()) if args.resume else None
    if start is None:
        print("# Factorizations of (a^e - 1)/(a - 1) for a in {2, 3, 5}.")
        print("# Format: <base> <exponent>: <prime>[^<k>] ... [C<cofactor>] | <provenance>")
        print("# Provenance 'computed': ECM/QS run, every factor re-verified on load.")
    for base, emax in RANGES.items():
        for e in range(2, emax + 1):
            if not wanted(base, e) or (start and (base, e) < start):
                continue
            n = (base**e - 1) // (base - 1)
            t0 = time.time()
            primes, cof = factor_bounded(n, args.timeout)
            toks = [f"{p}^{k}" if k > 1 else str(p) for p, k in sorted(primes)]
            if cof is not None:
                toks.append(f"C{cof}")
            print(f"{base} {e}: {' '.join(toks)} | computed", flush=True)
            print(f"{base} {e} {time.time() - t0:.1f}s", file=sys.stderr, flush=True)


if __name__ == "__main__":
    main()
