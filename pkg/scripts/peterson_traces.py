"""Generate lasso traces of the two-process flag algorithm (with its deadlock defect).

Each state records both program counters, both flags, which process moves next
(sched_i) and start (initial state only). A schedule is a prefix of process ids
plus a loop of process ids repeated forever; the lasso is cut where the
configuration and loop phase first repeat.

    python scripts/peterson_traces.py > traces.txt
"""

import argparse

LOCS = ("a1", "a2", "a3", "cs", "a4")
AP = [f"{l}_{i}" for i in (0, 1) for l in LOCS] + ["flag_0", "flag_1", "sched_0", "sched_1", "start"]


def step(conf, i, guarded=True):
    loc, flag = list(conf[0]), list(conf[1])
    at = loc[i]
    if at == "a2":
        flag[i] = True
    elif at == "a3" and flag[1 - i] and guarded:
        return conf  # busy wait
    elif at == "a4":
        flag[i] = False
    loc[i] = LOCS[(LOCS.index(at) + 1) % len(LOCS)]
    return tuple(loc), tuple(flag)


def state(conf, mover, first):
    loc, flag = conf
    true = {f"{loc[0]}_0", f"{loc[1]}_1", f"sched_{mover}"}
    true |= {f"flag_{i}" for i in (0, 1) if flag[i]}
    if first:
        true.add("start")
    return ",".join("1" if a in true else "0" for a in AP)


def lasso(prefix, loop, comment="", guarded=True):
    """Run ``prefix`` then ``loop`` forever; cut where the configuration first repeats."""
    conf = (("a1", "a1"), (False, False))
    states, seen = [], {}
    k = 0
    while True:
        if k >= len(prefix):
            phase = (k - len(prefix)) % len(loop)
            if (conf, phase) in seen:
                start = seen[(conf, phase)]
                break
            seen[(conf, phase)] = k
            i = loop[phase]
        else:
            i = prefix[k]
        states.append(state(conf, i, k == 0))
        conf = step(conf, i, guarded)
        k += 1
    if start == 0:
        raise ValueError("loop would repeat the start state")
    if len(states) > 32:
        raise ValueError(f"trace has {len(states)} states, more than 32")
    text = ";".join(states) + f"::{start}"
    return f"# {comment}\n{text}" if comment else text


TRACES = {
    # positives
    "alternating": ("+", [0] * 5, [1] * 5 + [0] * 5, "each process completes a round in turn"),
    "interleaved": ("+", [0], [0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 1],
                    "interleaved rounds, process 1 waits at a3_1 while process 0 is inside"),
    "idle0": ("+", [1], [1, 1, 1, 1, 1], "process 0 stays in its non-critical section"),
    "idle1": ("+", [0], [0, 0, 0, 0, 0], "process 1 stays in its non-critical section"),
    "stall0": ("+", [0], [1, 1, 1, 1, 1], "process 0 is never scheduled again before setting its flag"),
    "stall1": ("+", [1], [0, 0, 0, 0, 0], "process 1 is never scheduled again before setting its flag"),
    "park0": ("+", [0, 0, 0], [1], "process 0 is never scheduled again inside its critical section"),
    # negatives
    "deadlock": ("-", [0, 1, 0, 1], [0, 1], "both processes spin at a3 with both flags raised"),
    # the await removed: both processes reach the critical section together
    "race": ("-", [0, 0, 1, 1, 0, 1], [0, 0, 1, 1] + [0] * 3 + [1] * 3, "without the await both enter", False),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(TRACES))
    args = ap.parse_args()
    pos = [lasso(*TRACES[n][1:]) for n in args.names if TRACES[n][0] == "+"]
    neg = [lasso(*TRACES[n][1:]) for n in args.names if TRACES[n][0] == "-"]
    print("\n".join(pos))
    print("---")
    print("\n".join(neg))
    print("---")
    print(",".join(AP))


if __name__ == "__main__":
    main()
