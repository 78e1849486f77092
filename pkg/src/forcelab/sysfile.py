"""Line-oriented system files.

Grammar (one directive per line, # starts a comment, blank lines ignored):

    system "<label>"
    conditions <id> <id> ...
    order <id> <= <id> ; <id> <= <id> ; ...
    auto <id> : <cond>-><cond> <cond>-><cond> ...
    group <id> = < <auto-id> , ... >
    filterbase <entry> [, <entry> ...]
    name <id> = { (<name-id>,<cond-id>) ... } | check <k> | bullet { <name-id> ... }
    classname <id> = ...

The token 1 must appear among the conditions and denotes the top element.
Automorphism mappings list only moved conditions. A filterbase entry is
the group id (the full group), an inline generator list < a , b >, or
fix(a b ...) meaning the subgroup generated by every declared
automorphism except those listed. Without group or filterbase lines the
system defaults to the identity-only group and the base [full group].
"""

import re
from dataclasses import dataclass, field

from .errors import SystemFileError
from .names import ClassName, NameStore
from .order import Preorder
from .symmetry import Automorphism, AutomorphismGroup, SubgroupFilter, SymmetricSystem

TOKEN = re.compile(r"^[A-Za-z0-9_.:-]+$")


@dataclass
class Workspace:
    """A loaded system with its name store and the labels declared for it."""

    system: SymmetricSystem
    store: NameStore
    names: dict = field(default_factory=dict)
    classnames: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def resolve_condition(self, token):
        if token == "root":
            token = "1"
        self.system.order.index(token)    # raises on unknown tokens
        return token

    def resolve_name(self, token):
        if token in self.names:
            return self.names[token]
        if token in self.classnames:
            return self.classnames[token]
        raise SystemFileError(0, "unknown name id %r" % token)


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def loads(text):
    label = None
    conditions = []
    order_pairs = []
    autos = {}          # id -> mapping dict token->token
    auto_order = []
    group_decl = None   # (id, [auto ids])
    filter_exprs = None
    name_decls = []     # (line_no, kind, id, payload)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "system":
            if label is not None:
                raise SystemFileError(line_no, "duplicate system directive")
            m = re.fullmatch(r'"([^"]*)"', rest)
            if not m:
                raise SystemFileError(line_no, 'expected system "<label>"')
            label = m.group(1)
        elif head == "conditions":
            toks = rest.split()
            if not toks:
                raise SystemFileError(line_no, "empty conditions line")
            for t in toks:
                if not TOKEN.match(t):
                    raise SystemFileError(line_no, "bad condition token %r" % t)
                if t in conditions:
                    raise SystemFileError(line_no, "duplicate condition %r" % t)
                conditions.append(t)
        elif head == "order":
            for part in filter(None, (p.strip() for p in rest.split(";"))):
                m = re.fullmatch(r"(\S+)\s*<=\s*(\S+)", part)
                if not m:
                    raise SystemFileError(line_no, "expected <id> <= <id>, got %r" % part)
                order_pairs.append((line_no, m.group(1), m.group(2)))
        elif head == "auto":
            m = re.fullmatch(r"(\S+)\s*:\s*(.*)", rest)
            if not m:
                raise SystemFileError(line_no, "expected auto <id> : <maps>")
            aid, maps = m.group(1), m.group(2)
            if aid in autos:
                raise SystemFileError(line_no, "duplicate auto %r" % aid)
            mapping = {}
            for pair in maps.split():
                pm = re.fullmatch(r"(\S+)->(\S+)", pair)
                if not pm:
                    raise SystemFileError(line_no, "bad mapping %r" % pair)
                if pm.group(1) in mapping:
                    raise SystemFileError(line_no, "condition %r mapped twice" % pm.group(1))
                mapping[pm.group(1)] = pm.group(2)
            autos[aid] = (line_no, mapping)
            auto_order.append(aid)
        elif head == "group":
            if group_decl is not None:
                raise SystemFileError(line_no, "duplicate group directive")
            m = re.fullmatch(r"(\S+)\s*=\s*<(.*)>", rest)
            if not m:
                raise SystemFileError(line_no, "expected group <id> = < ... >")
            gens = [g.strip() for g in m.group(2).split(",") if g.strip()]
            group_decl = (line_no, m.group(1), gens)
        elif head == "filterbase":
            if filter_exprs is not None:
                raise SystemFileError(line_no, "duplicate filterbase directive")
            filter_exprs = (line_no, _split_filter_entries(line_no, rest))
        elif head in ("name", "classname"):
            m = re.fullmatch(r"(\S+)\s*=\s*(.*)", rest)
            if not m:
                raise SystemFileError(line_no, "expected %s <id> = <body>" % head)
            name_decls.append((line_no, head, m.group(1), m.group(2).strip()))
        else:
            raise SystemFileError(line_no, "unknown directive %r" % head)

    if label is None:
        raise SystemFileError(1, "missing system directive")
    if not conditions:
        raise SystemFileError(1, "missing conditions directive")

    def cond_check(line_no, tok):
        if tok not in conditions:
            raise SystemFileError(line_no, "unknown condition %r" % tok)
        return tok

    pairs = [(cond_check(ln, lo), cond_check(ln, hi)) for ln, lo, hi in order_pairs]
    order = Preorder(conditions, pairs)

    index = {c: i for i, c in enumerate(conditions)}
    auto_objs = {}
    for aid in auto_order:
        line_no, mapping = autos[aid]
        perm = list(range(len(conditions)))
        for src, dst in mapping.items():
            perm[index[cond_check(line_no, src)]] = index[cond_check(line_no, dst)]
        if sorted(perm) != list(range(len(conditions))):
            raise SystemFileError(line_no, "auto %r is not a bijection" % aid)
        auto_objs[aid] = Automorphism(aid, perm)

    def auto_check(line_no, aid):
        if aid not in auto_objs:
            raise SystemFileError(line_no, "unknown auto %r" % aid)
        return auto_objs[aid]

    if group_decl is None:
        group_id = "G"
        group = AutomorphismGroup.generated(len(conditions), [])
    else:
        line_no, group_id, gens = group_decl
        group = AutomorphismGroup.generated(
            len(conditions), [auto_check(line_no, g) for g in gens])

    if filter_exprs is None:
        raise SystemFileError(1, "filter base required")
    line_no, entries = filter_exprs
    base = []
    for entry in entries:
        base.append(_filter_entry(line_no, entry, group_id, group,
                                  auto_objs, auto_order, len(conditions)))
    system = SymmetricSystem(label, order, group, SubgroupFilter(base))
    system.assert_valid()

    store = NameStore(system)
    ws = Workspace(system, store)
    for line_no, kind, nid, body in name_decls:
        if nid in ws.names or nid in ws.classnames:
            raise SystemFileError(line_no, "duplicate name id %r" % nid)
        name = _parse_name_body(line_no, body, ws, cond_check)
        if kind == "name":
            ws.names[nid] = name
        else:
            ws.classnames[nid] = ClassName(name)
    return ws


def _split_filter_entries(line_no, rest):
    entries, depth, cur = [], 0, []
    for ch in rest:
        if ch in "<(":
            depth += 1
        elif ch in ">)":
            depth -= 1
            if depth < 0:
                raise SystemFileError(line_no, "unbalanced brackets in filterbase")
        if ch == "," and depth == 0:
            entries.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SystemFileError(line_no, "unbalanced brackets in filterbase")
    entries.append("".join(cur).strip())
    if any(not e for e in entries):
        raise SystemFileError(line_no, "empty filterbase entry")
    return entries


def _filter_entry(line_no, entry, group_id, group, auto_objs, auto_order, n):
    if entry == group_id:
        return frozenset(group.elements)
    m = re.fullmatch(r"<(.*)>", entry)
    if m:
        gens = [g.strip() for g in m.group(1).split(",") if g.strip()]
        for g in gens:
            if g not in auto_objs:
                raise SystemFileError(line_no, "unknown auto %r" % g)
        sub = AutomorphismGroup.generated(n, [auto_objs[g] for g in gens])
        members = frozenset(group.by_perm[a.perm] for a in sub
                            if a.perm in group.by_perm)
        if len(members) != len(sub):
            raise SystemFileError(line_no, "entry %r is not inside the group" % entry)
        return members
    m = re.fullmatch(r"fix\(([^)]*)\)", entry)
    if m:
        fixed = m.group(1).replace(",", " ").split()
        for g in fixed:
            if g not in auto_objs:
                raise SystemFileError(line_no, "unknown auto %r" % g)
        keep = [auto_objs[g] for g in auto_order if g not in fixed]
        sub = AutomorphismGroup.generated(n, keep)
        return frozenset(group.by_perm[a.perm] for a in sub)
    raise SystemFileError(line_no, "bad filterbase entry %r" % entry)


def _parse_name_body(line_no, body, ws, cond_check):
    store = ws.store
    if body.startswith("check"):
        arg = body[len("check"):].strip()
        if not arg.isdigit():
            raise SystemFileError(line_no, "check expects a natural number")
        return store.check_name(int(arg))
    if body.startswith("bullet"):
        m = re.fullmatch(r"bullet\s*\{(.*)\}", body)
        if not m:
            raise SystemFileError(line_no, "expected bullet { <ids> }")
        children = []
        for tok in m.group(1).split():
            children.append(_name_ref(line_no, tok, ws))
        return store.bullet(children)
    m = re.fullmatch(r"\{(.*)\}", body)
    if m:
        entries = []
        inner = m.group(1).strip()
        if inner:
            for pair in re.findall(r"\(([^)]*)\)", inner):
                bits = [b.strip() for b in pair.split(",")]
                if len(bits) != 2:
                    raise SystemFileError(line_no, "bad entry (%s)" % pair)
                child = _name_ref(line_no, bits[0], ws)
                entries.append((child, cond_check(line_no, bits[1])))
            leftovers = re.sub(r"\([^)]*\)", "", inner).strip()
            if leftovers:
                raise SystemFileError(line_no, "unexpected %r in name body" % leftovers)
        return store.intern_tokens(entries)
    raise SystemFileError(line_no, "bad name body %r" % body)


def _name_ref(line_no, tok, ws):
    if tok in ws.names:
        return ws.names[tok]
    if tok in ws.classnames:
        raise SystemFileError(line_no, "class name %r cannot be an entry" % tok)
    raise SystemFileError(line_no, "unknown name %r (declare it first)" % tok)


def serialize(ws):
    """Canonical text form; loading it back yields an equal system."""
    system, store = ws.system, ws.store
    order = system.order
    out = ['system "%s"' % system.label]
    out.append("conditions " + " ".join(order.conditions))
    rels = []
    for a in order.conditions:
        for b in order.conditions:
            if a != b and order.leq(a, b):
                rels.append("%s <= %s" % (a, b))
    if rels:
        out.append("order " + " ; ".join(rels))
    labels = {}
    for auto in system.group:
        if auto is system.group.identity:
            continue
        labels[auto] = "g%d" % len(labels)
        moved = " ".join("%s->%s" % (order.conditions[i], order.conditions[auto.perm[i]])
                         for i in range(order.n) if auto.perm[i] != i)
        out.append("auto %s : %s" % (labels[auto], moved))
    def gen_list(gens):
        return "< " + " , ".join(gens) + " >" if gens else "< >"

    out.append("group G = " + gen_list(
        [labels[a] for a in system.group if a is not system.group.identity]))
    entries = []
    for entry in sorted(system.filter.base,
                        key=lambda e: (len(e), sorted(a.perm for a in e))):
        if len(entry) == len(system.group):
            entries.append("G")
        else:
            entries.append(gen_list([labels[a] for a in sorted(entry, key=lambda a: a.perm)
                                     if a is not system.group.identity]))
    out.append("filterbase " + " , ".join(entries))

    declared = {}
    for label, name in sorted(ws.names.items()):
        declared[name.nid] = label
    class_labels = {}
    for label, cname in sorted(ws.classnames.items()):
        class_labels.setdefault(cname.name.nid, label)
    roots = [ws.names[k] for k in sorted(ws.names)]
    roots += [ws.classnames[k].name for k in sorted(ws.classnames)]
    closure = store.transitive_closure(roots) if roots else []

    def label_for(x):
        if x.nid in declared:
            return declared[x.nid]
        lab = "_n%d" % x.nid
        declared[x.nid] = lab
        return lab

    for x in closure:
        head = "name %s" % label_for(x)
        if x.entries:
            body = "{ %s }" % " ".join(
                sorted("(%s,%s)" % (label_for(c), order.conditions[r])
                       for c, r in x.entries))
        else:
            body = "{ }"
        out.append("%s = %s" % (head, body))
    for nid, label in sorted(class_labels.items(), key=lambda kv: kv[1]):
        out.append("classname %s = { %s }" % (label, " ".join(
            sorted("(%s,%s)" % (declared[c.nid], order.conditions[r])
                   for c, r in store._names[nid].entries))))
    return "\n".join(out) + "\n"
