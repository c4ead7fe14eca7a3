"""Integral maps between vector configurations, by backtracking.

This is the workhorse behind form equivalence, cell equivalence, and
stabilizer computation.  Given a source and a target configuration of
antipodal vector pairs, it enumerates the unimodular integer matrices g
with g * source = target (as sets of pairs), pruning partial
assignments with an invariant bilinear form on each side:

* for quadratic forms, the Gram matrices themselves (a map realizing
  the equivalence must match all pairwise Gram values);
* for cells, the adjugate of the configuration's barycenter matrix
  sum_x x x^t, which any set-preserving map must conjugate correctly.

Candidate maps are solved from a base of n independent source vectors;
with n pairing constraints active at depth n, the search tree collapses
quickly at the sizes that occur here (at most a few dozen pairs).
All solutions are found, so stabilizers come out as complete groups.
"""

from .forms import GroupElement, bilinear, canonical_pair
from .linalg import adjugate, det_int, fraction_inverse, mat_mul, mat_rank


def barycenter_matrix(vectors):
    """sum of x x^t over the configuration (positive definite iff spanning)."""
    n = len(vectors[0])
    out = [[0] * n for _ in range(n)]
    for v in vectors:
        for i in range(n):
            for j in range(n):
                out[i][j] += v[i] * v[j]
    return tuple(tuple(r) for r in out)


def cell_invariant(vectors):
    """Cheap complete-enough invariant used to bucket cells before matching."""
    b = barycenter_matrix(vectors)
    c = adjugate(b)
    profiles = sorted(
        (bilinear(c, x, x),
         tuple(sorted(abs(bilinear(c, x, y)) for y in vectors)))
        for x in vectors
    )
    return (len(vectors), det_int(b), tuple(profiles))


def form_invariant(gram, vectors):
    """Bucketing invariant for forms with their minimal vectors."""
    profiles = sorted(
        (tuple(sorted(abs(bilinear(gram, x, y)) for y in vectors)),)
        for x in vectors
    )
    return (len(vectors), det_int(gram), tuple(profiles))


def _independent_base(vectors):
    base = []
    rows = []
    for i, v in enumerate(vectors):
        if mat_rank(rows + [v]) > len(rows):
            rows.append(v)
            base.append(i)
    if len(base) != len(vectors[0]):
        raise ValueError("configuration does not span")
    return base


def _maps(src, dst, src_pair, dst_pair, accept, det_one, first_only):
    """All integer g with compatible pairings sending base vectors of
    `src` into signed vectors of `dst`, filtered through `accept`."""
    n = len(src[0])
    base = _independent_base(src)
    base_vecs = [src[i] for i in base]
    # Columns of X are the base vectors; candidate g = Y X^-1.
    x_cols = [[base_vecs[j][i] for j in range(n)] for i in range(n)]
    x_inv = fraction_inverse(x_cols)
    signed = []
    for v in dst:
        signed.append(v)
        signed.append(tuple(-t for t in v))
    signed.sort()
    src_gram = [[bilinear(src_pair, a, b) for b in base_vecs]
                for a in base_vecs]
    results = []
    images = []

    def leaf():
        y_cols = [[images[j][i] for j in range(n)] for i in range(n)]
        g_rows = []
        for i in range(n):
            row = []
            for j in range(n):
                val = sum(y_cols[i][k] * x_inv[k][j] for k in range(n))
                if val.denominator != 1:
                    return False
                row.append(int(val))
            g_rows.append(tuple(row))
        d = det_int(g_rows)
        if d not in (1, -1):
            return False
        if det_one and d != 1:
            return False
        g = GroupElement(rows=tuple(g_rows), det=d)
        if accept(g):
            results.append(g)
            return first_only
        return False

    def extend(depth):
        if depth == n:
            return leaf()
        want_self = src_gram[depth][depth]
        for y in signed:
            if bilinear(dst_pair, y, y) != want_self:
                continue
            ok = True
            for j in range(depth):
                if bilinear(dst_pair, images[j], y) != src_gram[depth][j]:
                    ok = False
                    break
            if not ok:
                continue
            images.append(y)
            if extend(depth + 1):
                return True
            images.pop()
        return False

    extend(0)
    return results


def cell_maps(src_vectors, dst_vectors, det_one=False, first_only=False):
    """Unimodular g with g * src = dst as sets of antipodal pairs."""
    src = tuple(sorted(src_vectors))
    dst = tuple(sorted(dst_vectors))
    if len(src) != len(dst):
        return []
    b_src = barycenter_matrix(src)
    b_dst = barycenter_matrix(dst)
    if det_int(b_src) != det_int(b_dst):
        return []
    c_src = adjugate(b_src)
    c_dst = adjugate(b_dst)
    dst_set = set(dst)

    def accept(g):
        return all(canonical_pair(g.apply(v)) in dst_set for v in src)

    return _maps(src, dst, c_src, c_dst, accept, det_one, first_only)


def form_maps(src_form, src_vectors, dst_form, dst_vectors,
              det_one=False, first_only=False):
    """Unimodular g with act(g, src_form) = dst_form exactly.

    Equivalently g^t * dst_gram * g = src_gram; minimal vectors then map
    by v -> g v automatically.
    """
    src = tuple(sorted(src_vectors))
    dst = tuple(sorted(dst_vectors))
    if len(src) != len(dst):
        return []
    if det_int(src_form.gram) != det_int(dst_form.gram):
        return []
    src_gram = src_form.gram
    dst_gram = dst_form.gram

    def accept(g):
        gt = tuple(zip(*g.rows))
        return mat_mul(mat_mul(gt, dst_gram), g.rows) == src_gram

    return _maps(src, dst, src_gram, dst_gram, accept, det_one, first_only)


def cell_stabilizer(vectors, det_one=False):
    """The full finite group {g : g * S = S} of a spanning configuration."""
    elems = cell_maps(vectors, vectors, det_one=det_one)
    return tuple(sorted(elems, key=lambda g: g.rows))


def form_automorphisms(form, vectors, det_one=False):
    """The full automorphism group {g : g^t Q g = Q} of a perfect form."""
    elems = form_maps(form, vectors, form, vectors, det_one=det_one)
    return tuple(sorted(elems, key=lambda g: g.rows))


def pair_swap_elements(cell_a, cell_b, group_elements=None, det_one=False):
    """Elements exchanging two cells: g * a = b and g * b = a setwise."""
    a = tuple(sorted(cell_a))
    b = tuple(sorted(cell_b))
    out = []
    for g in cell_maps(a, b, det_one=det_one):
        if tuple(sorted(canonical_pair(g.apply(v)) for v in b)) == a:
            out.append(g)
    return tuple(sorted(out, key=lambda g: g.rows))


def small_generating_set(elements):
    """A short generating set of a finite matrix group given in full.

    Scans the (sorted) element list, adding an element whenever it is
    not yet a product of the chosen ones.  The running closure is grown
    by generator-only left multiplication, so the total cost stays near
    one pass over the group per generator added.
    """
    if not elements:
        return ()
    n = elements[0].n
    ident = GroupElement.identity(n)
    if len(elements) == 1:
        return ()
    gens = []
    closure = {ident.rows: ident}
    for g in sorted(elements, key=lambda e: e.rows):
        if g.rows in closure:
            continue
        gens.append(g)
        frontier = list(closure.values())
        while frontier:
            nxt = []
            for h in frontier:
                for gen in gens:
                    prod = gen * h
                    if prod.rows not in closure:
                        closure[prod.rows] = prod
                        nxt.append(prod)
            frontier = nxt
        if len(closure) == len(elements):
            break
    return tuple(gens)


def orbit_decompose(keys, generators, apply, identity):
    """Orbits of `keys` under the group generated by `generators`.

    Returns (rep, {member: transporter}) per orbit with transporter *
    rep = member (the representative carries `identity`); every image
    must stay inside `keys`.
    """
    key_set = set(keys)
    assigned = set()
    orbits = []
    for key in keys:
        if key in assigned:
            continue
        members = {key: identity}
        frontier = [key]
        while frontier and generators:
            current = frontier.pop(0)
            s = members[current]
            for g in generators:
                img = apply(g, current)
                assert img in key_set, "group does not permute the keys"
                if img not in members:
                    members[img] = g * s
                    frontier.append(img)
        orbits.append((key, members))
        assigned.update(members)
    return orbits
