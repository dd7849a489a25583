"""Pure-Python kernels.

Letter codes: generator ``g`` is ``2*g``, its inverse ``2*g + 1``; so
``code ^ 1`` inverts a letter.  The compiled module ``_ckernels`` exposes the
same functions with the same results.
"""

BACKEND = "python"

UNDEF = -1


def free_reduce(codes):
    stack = []
    for c in codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return stack


def _lcp(a, b):
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def pieces(words):
    """Set of nonempty maximal common prefixes over pairs of distinct words.

    In sorted order the common prefix of any pair equals the common prefix of
    some adjacent pair between them, so adjacent pairs suffice.
    """
    ws = sorted(set(tuple(w) for w in words))
    out = set()
    for a, b in zip(ws, ws[1:]):
        n = _lcp(a, b)
        if n:
            out.add(a[:n])
    return out


def coset_enumerate(n_gens, relators, subgroup, max_cosets):
    """HLT coset enumeration.

    Returns ``(complete, table)`` where on completion ``table[c][x]`` is the
    action of column ``x`` (letter code) on live coset ``c`` after
    renumbering; on overflow ``table`` is ``None``.
    """
    ncols = 2 * n_gens
    table = [[UNDEF] * ncols]
    parent = [0]
    relators = [list(r) for r in relators if r]
    overflow = False

    def rep(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, x):
        nonlocal overflow
        if len(table) >= max_cosets:
            overflow = True
            return False
        b = len(table)
        table.append([UNDEF] * ncols)
        parent.append(b)
        table[c][x] = b
        table[b][x ^ 1] = c
        return True

    def merge(k, l, queue):
        a, b = rep(k), rep(l)
        if a != b:
            if a > b:
                a, b = b, a
            parent[b] = a
            queue.append(b)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(ncols):
                d = row[x]
                if d == UNDEF:
                    continue
                table[d][x ^ 1] = UNDEF
                mu, nu = rep(g), rep(d)
                if table[mu][x] != UNDEF:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] != UNDEF:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(c, w):
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] != UNDEF:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return True
            while j >= i and table[b][w[j] ^ 1] != UNDEF:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return True
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return True
            if not define(f, w[i]):
                return False

    for h in subgroup:
        if h and not scan_and_fill(0, list(h)):
            return False, None

    a = 0
    while a < len(table):
        if parent[a] == a:
            for w in relators:
                if not scan_and_fill(a, w):
                    return False, None
                if parent[a] != a:
                    break
            if parent[a] == a:
                for x in range(ncols):
                    if table[a][x] == UNDEF and not define(a, x):
                        return False, None
        a += 1

    live = [c for c in range(len(table)) if parent[c] == c]
    index = {c: i for i, c in enumerate(live)}
    out = [[index[rep(table[c][x])] for x in range(ncols)] for c in live]
    return True, out
