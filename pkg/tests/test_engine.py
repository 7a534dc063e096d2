import random

from hypothesis import given, settings, strategies as st

from orbitgames.engine import (INF, Arena, Player, bounded_play_check, build_arena, extract_strategy,
                               relation_at_rank, solve_closed_game)

I, II = Player.I, Player.II


def chain_arena():
    # p0 (II) -> p1 (I) -> p2 unsafe
    return Arena((II, I, I), ((1,), (2,), ()), (True, True, False))


def test_self_loop():
    a = Arena((II,), ((0,),), (True,))
    r = solve_closed_game(a)
    assert r.winner[0] is II and r.rank[0] == INF
    assert extract_strategy(a, r, II)(0) == 0
    assert bounded_play_check(a, 5) is II


def test_unsafe_initial():
    a = Arena((II,), ((0,),), (False,))
    r = solve_closed_game(a)
    assert r.winner[0] is I and r.rank[0] == 0
    for d in (1, 3, 10):
        assert bounded_play_check(a, d) is I


def test_chain_rank_two():
    a = chain_arena()
    r = solve_closed_game(a)
    assert r.winner[0] is I and r.rank[0] == 2
    assert extract_strategy(a, r, I)(1) == 2
    assert relation_at_rank([a], 0) == [True]
    assert [relation_at_rank([a], k)[0] for k in range(6)] == [True, True, True, False, False, False]


def test_ii_picks_safe_move():
    # II at 0 may go to an unsafe trap (1) or a safe self-loop (2)
    a = Arena((II, II, II), ((1, 2), (1,), (2,)), (True, False, True))
    r = solve_closed_game(a)
    s = extract_strategy(a, r, II)
    assert s(0) == 2
    p = 0
    for _ in range(10):
        assert a.safe[p]
        p = s(p)


def test_dead_ends():
    assert solve_closed_game(Arena((II,), ((),), (True,))).winner[0] is I
    assert solve_closed_game(Arena((I,), ((),), (True,))).winner[0] is II


def test_ii_arena_related_everywhere():
    a = Arena((II,), ((0,),), (True,))
    assert all(relation_at_rank({"k": a}, k)["k"] for k in range(5))


def test_build_arena_does_not_expand_unsafe_states():
    seen = []

    def succ(s):
        seen.append(s)
        return [s + 1]

    arena, states = build_arena(0, lambda s: II, succ, lambda s: s < 3)
    assert states == [0, 1, 2, 3] and 3 not in seen
    assert solve_closed_game(arena).winner[0] is I


def random_arena(rng: random.Random, n: int) -> Arena:
    owner = tuple(rng.choice((I, II)) for _ in range(n))
    moves = tuple(tuple(sorted(rng.sample(range(n), rng.randint(0, min(3, n))))) for _ in range(n))
    safe = tuple(rng.random() > 0.2 for _ in range(n))
    return Arena(owner, moves, safe, rng.randrange(n))


def test_random_arenas_match_bounded_play():
    rng = random.Random(1)
    for _ in range(200):
        a = random_arena(rng, rng.randint(1, 40))
        r = solve_closed_game(a)
        for p in a.positions:
            assert bounded_play_check(a, len(a) + 1, start=p) is r.winner[p]


arenas = st.integers(1, 12).flatmap(lambda n: st.builds(
    Arena,
    st.tuples(*[st.sampled_from([I, II])] * n),
    st.tuples(*[st.lists(st.integers(0, n - 1), max_size=3).map(lambda l: tuple(sorted(set(l))))] * n),
    st.tuples(*[st.booleans()] * n),
    st.integers(0, n - 1),
))


@settings(max_examples=200, deadline=None)
@given(arenas, st.data())
def test_monotone_under_added_moves(a, data):
    r = solve_closed_game(a)
    p = data.draw(st.integers(0, len(a) - 1))
    q = data.draw(st.integers(0, len(a) - 1))
    b = a.with_moves(p, sorted(set(a.moves[p]) | {q}))
    r2 = solve_closed_game(b)
    owner = a.owner[p]
    for z in a.positions:
        if r.winner[z] is owner:
            assert r2.winner[z] is owner


@settings(max_examples=200, deadline=None)
@given(arenas)
def test_rank_formula_and_determinacy(a):
    r = solve_closed_game(a)
    for p in a.positions:
        assert r.winner[p] in (I, II)
        assert (r.rank[p] == INF) == (r.winner[p] is II)
        if not a.safe[p]:
            assert r.rank[p] == 0
            continue
        succ = [r.rank[q] for q in a.moves[p]]
        if not succ:
            assert r.rank[p] == (0 if a.owner[p] is II else INF)
        elif a.owner[p] is I:
            assert r.rank[p] == 1 + min(succ)
        else:
            assert r.rank[p] == 1 + max(succ)


@settings(max_examples=150, deadline=None)
@given(arenas)
def test_relation_at_rank_antitone_and_stable(a):
    r = solve_closed_game(a)
    vals = [relation_at_rank([a], k, [r])[0] for k in range(len(a) + 3)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    assert all(v == (r.winner[a.initial] is II) for v in vals[len(a):])


@settings(max_examples=150, deadline=None)
@given(arenas)
def test_strategy_replay(a):
    r = solve_closed_game(a)
    w = r.winner[a.initial]
    s = extract_strategy(a, r, w)
    # the winner's strategy against every opponent move, explored exhaustively
    seen, stack = set(), [a.initial]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        assert r.winner[p] is w
        if w is I and not a.safe[p]:
            continue
        if a.owner[p] is w:
            if not a.moves[p]:
                continue
            q = s(p)
            assert q in a.moves[p]
            if w is I:
                assert r.rank[q] < r.rank[p]
            stack.append(q)
        else:
            stack.extend(a.moves[p])
    if w is II:
        assert all(a.safe[p] for p in seen)
