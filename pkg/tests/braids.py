"""Closed braids as PD codes, for generating test diagrams."""

from bnflow.diagram import parse_pd


def closure_pd(strands: int, word) -> str:
    """PD text of the closure of ``word`` (nonzero ints, sign = crossing sign).

    Every strand position must be touched by some generator, otherwise the
    closure would contain a crossingless component.
    """
    label = list(range(strands))
    nxt = strands
    raw = []
    for g in word:
        i = abs(g) - 1
        l_in, r_in = label[i], label[i + 1]
        l_out, r_out = nxt, nxt + 1
        nxt += 2
        if g > 0:  # under-strand l_in -> r_out
            raw.append((l_in, r_in, r_out, l_out))
        else:  # under-strand r_in -> l_out
            raw.append((r_in, r_out, l_out, l_in))
        label[i], label[i + 1] = l_out, r_out
    close = {label[k]: k for k in range(strands)}
    ident = lambda e: close.get(e, e)
    succ = {}
    for g, x in zip(word, raw):
        succ[x[0]] = x[2]
        if g > 0:
            succ[x[1]] = x[3]
        else:
            succ[x[3]] = x[1]
    order, count = {}, 0
    for start in range(strands):
        e = start
        while ident(e) not in order:
            count += 1
            order[ident(e)] = count
            e = succ[ident(e)]
    return " ".join("X[%d,%d,%d,%d]" % tuple(order[ident(e)] for e in x) for x in raw)


def closure(strands: int, word):
    return parse_pd(closure_pd(strands, word))
