"""Size against speed: how the chain gadgets separate the weak and strong numbers."""

from seqcolor.defining_sets import ssdn, wsdn
from seqcolor.gadgets import build_D, build_G_xi
from seqcolor.rules import preset

RT = preset("RT")


def names(ocg, vs):
    label = {v: lab for lab, v in ocg.marks.items()}
    return sorted(label[v] for v in vs)


def main():
    for k in (1, 2, 3):
        d = build_D(k + 1).graph
        w = wsdn(d, RT, k + 1)
        fast = wsdn(d, RT, k)
        print(f"D_{k + 1}: {w.number} seeds {names(d, w.witness.set)} in {w.witness.rounds} rounds; "
              f"with a {k}-round budget it takes {fast.number}")
    g = build_G_xi(2, 1).graph
    for k in (1, 2):
        s = ssdn(g, RT, k)
        print(f"G_2, {k}-round budget: best index {s.number} from {names(g, s.witness.set)} "
              f"(finishes in round {s.witness.rounds}, {s.explored} seed sets solved)")


if __name__ == "__main__":
    main()
