//! Conflict-driven clause learning: two watched literals, first-UIP
//! learning, VSIDS with phase saving and Luby restarts.

use std::time::Instant;

type Lit = u32;

const UNDEF: i8 = -1;

fn mk_lit(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    (v << 1) | (dimacs < 0) as u32
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn not(l: Lit) -> Lit {
    l ^ 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Unknown,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
}

struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![NOT_IN_HEAP; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != NOT_IN_HEAP
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[parent]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && act[self.heap[r]] > act[self.heap[l]] { r } else { l };
            if act[self.heap[c]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i]] = i;
            i = c;
        }
        self.heap[i] = v;
        self.pos[v] = i;
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v] = i;
        self.sift_up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty");
        self.pos[top] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v], act);
        }
    }
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<usize>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    learnts: usize,
    max_learnts: f64,
    trivially_unsat: bool,
    pub conflicts: u64,
    pub decisions: u64,
}

fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq as i32)
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        let mut s = Solver {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assigns: vec![UNDEF; num_vars],
            level: vec![0; num_vars],
            reason: vec![None; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            heap: VarHeap::new(num_vars),
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            learnts: 0,
            max_learnts: 0.0,
            trivially_unsat: false,
            conflicts: 0,
            decisions: 0,
        };
        for v in 0..num_vars {
            s.heap.insert(v, &s.activity);
        }
        s
    }

    fn value(&self, l: Lit) -> i8 {
        let a = self.assigns[var(l)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as i8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.assigns[v] = (l & 1 == 0) as i8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause of DIMACS literals. Must be called before `solve`.
    pub fn add_clause(&mut self, clause: &[i32]) {
        if self.trivially_unsat {
            return;
        }
        let mut lits: Vec<Lit> = clause.iter().map(|&d| mk_lit(d)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == not(w[1])) {
            return;
        }
        lits.retain(|&l| self.value(l) != 0);
        if lits.iter().any(|&l| self.value(l) == 1) {
            return;
        }
        match lits.len() {
            0 => self.trivially_unsat = true,
            1 => {
                self.enqueue(lits[0], None);
                if self.propagate().is_some() {
                    self.trivially_unsat = true;
                }
            }
            _ => {
                self.attach(Clause {
                    lits,
                    learnt: false,
                    deleted: false,
                });
            }
        }
    }

    fn attach(&mut self, c: Clause) -> usize {
        let idx = self.clauses.len();
        self.watches[c.lits[0] as usize].push(idx);
        self.watches[c.lits[1] as usize].push(idx);
        if c.learnt {
            self.learnts += 1;
        }
        self.clauses.push(c);
        idx
    }

    /// Returns the index of a conflicting clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = not(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[ci].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[ci].lits[0];
                if self.value(first) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci].lits[k];
                    if self.value(l) != 0 {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[l as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        loop {
            let start = if p.is_some() { 1 } else { 0 };
            let lits = self.clauses[confl].lits.clone();
            for &q in &lits[start..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let lit = self.trail[index];
            self.seen[var(lit)] = false;
            path -= 1;
            p = Some(lit);
            if path == 0 {
                break;
            }
            confl = self.reason[var(lit)].expect("implied literal has a reason");
        }
        learnt[0] = not(p.expect("uip"));
        // Drop literals implied by others in the clause.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(k, &l)| k == 0 || !self.redundant(l))
            .collect();
        for &l in &learnt {
            self.seen[var(l)] = false;
        }
        let mut learnt: Vec<Lit> = learnt
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(l, _)| l)
            .collect();
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    /// Local minimization: a literal is redundant if its reason's other
    /// literals all occur in the learnt clause (marked `seen`) or sit at
    /// level 0.
    fn redundant(&self, l: Lit) -> bool {
        let Some(r) = self.reason[var(l)] else { return false };
        self.clauses[r].lits[1..]
            .iter()
            .all(|&q| self.seen[var(q)] || self.level[var(q)] == 0)
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&ci| {
                let c = &self.clauses[ci];
                if !c.learnt || c.deleted || c.lits.len() <= 2 {
                    return false;
                }
                let first = c.lits[0];
                !(self.value(first) == 1 && self.reason[var(first)] == Some(ci))
            })
            .collect();
        cands.sort_by_key(|&ci| std::cmp::Reverse(self.clauses[ci].lits.len()));
        for &ci in &cands[..cands.len() / 2] {
            self.clauses[ci].deleted = true;
            self.clauses[ci].lits = Vec::new();
            self.learnts -= 1;
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(((v as u32) << 1) | (!self.phase[v]) as u32);
            }
        }
        None
    }

    /// Searches for a model. `deadline` bounds the wall-clock time.
    pub fn solve(&mut self, deadline: Option<Instant>) -> Outcome {
        if self.trivially_unsat {
            return Outcome::Unsat;
        }
        if self.propagate().is_some() {
            return Outcome::Unsat;
        }
        self.max_learnts = (self.clauses.len() as f64 / 3.0).max(2000.0);
        let mut restart = 0u64;
        loop {
            let budget = (luby(2.0, restart) * 100.0) as u64;
            restart += 1;
            match self.search(budget, deadline) {
                Some(o) => return o,
                None => self.cancel_until(0),
            }
        }
    }

    fn search(&mut self, budget: u64, deadline: Option<Instant>) -> Option<Outcome> {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                local_conflicts += 1;
                if self.decision_level() == 0 {
                    return Some(Outcome::Unsat);
                }
                let (learnt, back) = self.analyze(confl);
                self.cancel_until(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let ci = self.attach(Clause {
                        lits: learnt,
                        learnt: true,
                        deleted: false,
                    });
                    self.enqueue(first, Some(ci));
                }
                self.var_inc /= 0.95;
                if self.conflicts % 256 == 0 {
                    if let Some(d) = deadline {
                        if Instant::now() >= d {
                            return Some(Outcome::Unknown);
                        }
                    }
                }
                continue;
            }
            if local_conflicts >= budget {
                return None;
            }
            if self.learnts as f64 - self.trail.len() as f64 >= self.max_learnts {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }
            self.decisions += 1;
            if self.decisions % 4096 == 0 {
                if let Some(d) = deadline {
                    if Instant::now() >= d {
                        return Some(Outcome::Unknown);
                    }
                }
            }
            match self.pick_branch() {
                None => return Some(Outcome::Sat),
                Some(l) => {
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(l, None);
                }
            }
        }
    }

    /// Value of each variable in the last model (index = variable - 1).
    pub fn model(&self) -> Vec<bool> {
        (0..self.num_vars).map(|v| self.assigns[v] == 1).collect()
    }
}
