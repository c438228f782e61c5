"""Shared driver for staged, guard-based cop strategies.

A StagedMachine owns logical cops 0..budget-1 and a set of PathGuards. Each
cop turn it steps the standing guards, advances an orchestrator generator
(which runs the stage/case logic and may create, morph or retire guards),
merges manual moves, and finally perturbs the result if the engine would
otherwise see a repeated position - repetition ends the match for the
robber, so freshness is part of correctness, not cosmetics.
"""

from __future__ import annotations

from . import guarding
from .errors import StrategyError
from .graph import bfs_distances, component_of


class GuardRec:
    """A guard on duty plus the bookkeeping the release logic needs."""

    __slots__ = ("name", "path", "guard", "entry_safe", "protected",
                 "self_covered")

    def __init__(self, name, path, guard, entry_safe=False, protected=True,
                 self_covered=None):
        self.name = name
        self.path = tuple(path)
        self.guard = guard
        self.entry_safe = entry_safe
        self.protected = protected
        # vertices this guard's own formation provably covers against entry;
        # claim-justified downgrades only vouch for the swapped segment's
        # interior and lean on their partner path for the rest
        self.self_covered = frozenset(self.path if self_covered is None
                                      else self_covered)

    def count(self):
        return len(self.guard.cop_ids)

    def full(self):
        return self.guard.mode in (guarding.THREE, guarding.BIP_TWO)


class TreeChase:
    """Two-cop pusher/rear pair for acyclic graphs; extra cops idle."""

    def __init__(self, g, budget):
        self.g = g
        self.budget = budget

    def placement(self):
        return [0] * self.budget

    def targets(self, robber, pos):
        g = self.g
        pusher, rear = pos[0], pos[1]
        dist = bfs_distances(g, robber)
        if dist[pusher] > 0:
            nxt = min(w for w in g.adj[pusher] if dist[w] == dist[pusher] - 1)
        else:
            nxt = pusher
        out = list(pos)
        out[0] = nxt
        out[1] = pusher if nxt != pusher else rear
        return out


class StagedMachine:
    """Engine-agnostic staged strategy: feed robber positions, get cop targets."""

    def __init__(self, g, budget):
        self.g = g
        self.budget = budget
        self.pos = None
        self.guards = []
        self.pool = list(range(budget))
        self.region = None
        self.stage = 0
        self.case = None
        self.stall = 0
        self._gen = None
        self._tree = None
        self._seen_after_move = set()
        self._seen_before_move = set()

    # subclasses implement _setup() -> initial positions (or set self._tree)
    # and _orchestrate() -> generator yielding manual move dicts

    def placement(self):
        self.pos = self._setup()
        if self._tree is None:
            self._gen = self._orchestrate()
            next(self._gen)
        return list(self.pos)

    def cop_targets(self, robber):
        if self._tree is not None:
            self.pos = self._tree.targets(robber, self.pos)
            return list(self.pos)
        # step standing guards first so the orchestrator reacts to fresh
        # lock states within the same turn (a wasted pass invites the
        # repetition rule)
        targets = {}
        stepped = []
        for rec in list(self.guards):
            positions = {c: self.pos[c] for c in rec.guard.cop_ids}
            targets.update(rec.guard.step(positions, robber))
            stepped.append(rec)
        manual = self._gen.send(robber)
        for rec in stepped:
            if rec not in self.guards:
                for c in rec.guard.cop_ids:
                    targets.pop(c, None)
        for rec in list(self.guards):
            if rec not in stepped:
                positions = {c: self.pos[c] for c in rec.guard.cop_ids}
                targets.update(rec.guard.step(positions, robber))
        targets.update(manual)
        out = [targets.get(c, self.pos[c]) for c in range(self.budget)]
        out = self._dodge_repetition(out, robber)
        self._assert_protected(robber, out)
        self.pos = out
        return list(out)

    def note_cop_turn(self, cops, robber):
        """Record the engine-visible position at the start of our turn."""
        self._seen_before_move.add((tuple(cops), robber))

    def annotations(self, robber):
        if self._tree is not None:
            return {"strategy": "tree-chase"}
        return {
            "stage": self.stage,
            "case": self.case,
            "region_size": len(self.region) if self.region is not None else None,
            "paths": [
                {"name": rec.name, "guard": rec.guard.annotation(robber)}
                for rec in self.guards
            ],
        }

    # -- repetition avoidance ---------------------------------------------------

    def _position_risky(self, out, robber):
        key = tuple(sorted(out))
        if (key, robber) in self._seen_after_move:
            return True
        occupied = set(key)
        for x in list(self.g.adj[robber]) + [robber]:
            if x not in occupied and (key, x) in self._seen_before_move:
                return True
        return False

    def _dodge_repetition(self, out, robber):
        """Never hand the engine a repeated position.

        Perturbation tiers: idle pool cops, progress-preserving deployment
        alternates and clamped-formation spares, pauses, regressive detours.
        Deploy bounds stretch by one per diverted turn.
        """
        if not self._position_risky(out, robber):
            self._seen_after_move.add((tuple(sorted(out)), robber))
            return out
        tiers = [[], [], [], []]
        for j in self.pool:
            for s in sorted(self.g.adj[self.pos[j]]) + [self.pos[j]]:
                tiers[0].append((j, s, None))
        for rec in self.guards:
            gd = rec.guard
            if gd.state == "deploy":
                for c in gd.cop_ids:
                    p = self.pos[c]
                    idx = gd.path_index.get(p)
                    if idx is None:
                        dec = sorted(
                            w for w in self.g.adj[p]
                            if 0 <= gd.path_dist[w] < gd.path_dist[p]
                        )
                        for s in dec:
                            tiers[1].append((c, s, rec))
                        for s in sorted(w for w in self.g.adj[p] if w not in dec):
                            tiers[3].append((c, s, rec))
                    else:
                        # a deploying cop may sidestep along its path and re-converge
                        if idx + 1 < len(gd.path):
                            tiers[1].append((c, gd.path[idx + 1], rec))
                        if idx > 0:
                            tiers[3].append((c, gd.path[idx - 1], rec))
                    tiers[2].append((c, p, rec))  # pause one turn
            elif gd.state == "stalk" and robber in gd.host:
                # clamped formations double up a slot; the duplicate cop may
                # hover one step along the path and still reach next turn
                d = gd.shadow(robber)
                slots = guarding.formation_slots(gd.mode, d,
                                                 gd.raw_dist(robber), gd.k)
                seen_slots = set()
                for i, c in enumerate(gd.cop_ids):
                    if slots[i] in seen_slots:
                        if slots[i] + 1 <= gd.k:
                            tiers[1].append((c, gd.path[slots[i] + 1], None))
                        if slots[i] - 1 >= 0:
                            tiers[1].append((c, gd.path[slots[i] - 1], None))
                    seen_slots.add(slots[i])
        options = tiers[0] + tiers[1] + tiers[2] + tiers[3]
        for c, s, rec in options:
            cand = list(out)
            cand[c] = s
            if not self._position_risky(cand, robber):
                if rec is not None and rec.guard.deploy_bound is not None:
                    rec.guard.deploy_bound += 1
                self._seen_after_move.add((tuple(sorted(cand)), robber))
                return cand
        for c1, s1, rec1 in options:
            for c2, s2, rec2 in options:
                if c2 <= c1:
                    continue
                cand = list(out)
                cand[c1] = s1
                cand[c2] = s2
                if not self._position_risky(cand, robber):
                    for rec in (rec1, rec2):
                        if rec is not None and rec.guard.deploy_bound is not None:
                            rec.guard.deploy_bound += 1
                    self._seen_after_move.add((tuple(sorted(cand)), robber))
                    return cand
        # nothing helps; record and accept (stall assertions will explain)
        self._seen_after_move.add((tuple(sorted(out)), robber))
        return out

    # -- invariants ---------------------------------------------------------------

    def _assert_protected(self, robber, targets):
        covered = set(targets)
        for rec in self.guards:
            # push is transitional: the bipartite pair tolerates (and then
            # squeezes out) a robber below it, so only settled stalks assert
            if not rec.protected or rec.guard.state != "stalk":
                continue
            if rec.guard.robber_off_seen and robber in rec.guard.path_set:
                raise StrategyError(f"robber stands on protected path {rec.name}")
            if robber in rec.guard.path_set:
                continue
            for w in self.g.adj[robber]:
                if w in rec.guard.path_set and w not in covered:
                    raise StrategyError(
                        f"uncovered protected vertex {w} of {rec.name} "
                        f"next to robber {robber}"
                    )

    # -- shared plumbing -----------------------------------------------------------

    def _walk_step(self, cop, dest):
        """One lex-min step of `cop` toward `dest` in the full graph."""
        pos = self.pos[cop]
        if pos == dest:
            return pos
        dist = bfs_distances(self.g, dest)
        return min(w for w in self.g.adj[pos] if dist[w] == dist[pos] - 1)

    def _region_of(self, robber):
        removed = set()
        for rec in self.guards:
            removed.update(rec.path)
        return tuple(component_of(self.g, robber, removed))

    def _release(self, rec):
        self.guards.remove(rec)
        self.pool.extend(rec.guard.cop_ids)
        self.pool.sort()

    def _release_covered(self, rset):
        """Retire guards the remaining ensemble can spare.

        A guard goes back to the pool when, without it, every region-adjacent
        vertex of every remaining path (and of its own path) still lies in
        some remaining guard's self-covered set. Detached guards satisfy
        this vacuously.
        """
        def adjacent(path_vs):
            return {v for v in path_vs
                    if any(w in rset for w in self.g.adj[v])}

        changed = True
        while changed and len(self.guards) > 1:
            changed = False
            for cand in list(self.guards):
                remaining = [r for r in self.guards if r is not cand]
                strong = set()
                for r in remaining:
                    strong.update(r.self_covered)
                ok = adjacent(cand.path) <= strong
                for r in remaining:
                    if not ok:
                        break
                    ok = adjacent(r.path) <= (strong | set(r.self_covered))
                if ok:
                    self._release(cand)
                    changed = True
                    break

    def _take(self, count):
        if len(self.pool) < count:
            raise StrategyError(
                f"cop budget exhausted: need {count}, pool {self.pool}"
            )
        return [self.pool.pop(0) for _ in range(count)]

    def _track_progress(self, region, prev_region):
        if prev_region is not None:
            if not set(region) <= set(prev_region):
                raise StrategyError("robber region escaped its enclosure")
            if len(region) >= len(prev_region):
                self.stall += 1
                if self.stall > 2:
                    raise StrategyError("region stopped shrinking")
            else:
                self.stall = 0
