use std::collections::HashMap;
use std::fmt::Debug;

use serde::Serialize;

use super::GameError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Winner {
    ForAll,
    Exists,
}

/// A two-player game where `∀` moves and `∃` answers with a new position.
/// Round 0 starts from the empty board (`None`).
pub trait Game {
    type Position: Clone + Debug + PartialEq;
    type Move: Clone + Debug + PartialEq + Serialize;

    /// Every legal move of `∀`; empty when he cannot move.
    fn forall_moves(&self, pos: Option<&Self::Position>) -> Vec<Self::Move>;

    /// Feed `∃`'s legal answers to `visit` in a fixed order until it returns `false`.
    fn for_each_reply(&self, pos: Option<&Self::Position>, mv: &Self::Move, visit: &mut dyn FnMut(Self::Position) -> bool);

    /// A key equal for positions the game cannot tell apart.
    fn key(&self, pos: &Self::Position) -> Vec<u8>;

    fn describe(&self, pos: &Self::Position) -> serde_json::Value;

    fn replies(&self, pos: Option<&Self::Position>, mv: &Self::Move) -> Vec<Self::Position> {
        let mut out = Vec::new();
        self.for_each_reply(pos, mv, &mut |p| {
            out.push(p);
            true
        });
        out
    }
}

/// `∀`'s scripted strategy: the move in a position at a round.
pub type ForallScript<'a, G> = &'a dyn Fn(Option<&<G as Game>::Position>, usize) -> Result<<G as Game>::Move, String>;

/// `∃`'s scripted strategy: a reply to a move, or `None` when stuck.
pub type ExistsScript<'a, G> = &'a dyn Fn(Option<&<G as Game>::Position>, &<G as Game>::Move) -> Option<<G as Game>::Position>;

pub enum ForallSide<'a, G: Game> {
    Search,
    Script(ForallScript<'a, G>),
}

pub enum ExistsSide<'a, G: Game> {
    Search,
    Script(ExistsScript<'a, G>),
}

#[derive(Clone, Debug, Serialize)]
pub enum CertKind<M> {
    /// `∃` has survived every round.
    Survived,
    /// `∀` cannot move.
    NoMove,
    /// `∀` plays `mv`; `replies[k]` is the node of `∃`'s `k`-th answer.
    ForallWins { mv: M, replies: Vec<usize> },
    /// For each `∀` move, the index of `∃`'s answer and its node.
    ExistsWins { answers: Vec<(M, usize, usize)> },
}

#[derive(Clone, Debug)]
pub struct CertNode<P, M> {
    pub pos: Option<P>,
    pub round: usize,
    pub winner: Winner,
    pub kind: CertKind<M>,
}

/// A winning strategy as a graph of positions, shared up to the game's key.
#[derive(Clone, Debug)]
pub struct Certificate<P, M> {
    pub nodes: Vec<CertNode<P, M>>,
    pub root: usize,
}

#[derive(Clone, Debug)]
pub struct SolveResult<P, M> {
    pub winner: Winner,
    /// For a `∀` win, the round in which `∃` is stuck on the longest line of
    /// his strategy; otherwise the number of rounds survived.
    pub depth: usize,
    pub states: u64,
    pub certificate: Certificate<P, M>,
}

pub struct Solver<'a, G: Game> {
    game: &'a G,
    forall: ForallSide<'a, G>,
    rounds: usize,
    budget: u64,
    states: u64,
    memo: HashMap<(Vec<u8>, usize), (Winner, usize, usize)>,
    nodes: Vec<CertNode<G::Position, G::Move>>,
}

impl<'a, G: Game> Solver<'a, G> {
    pub fn new(game: &'a G, forall: ForallSide<'a, G>, rounds: usize, budget: u64) -> Self {
        Solver {
            game,
            forall,
            rounds,
            budget,
            states: 0,
            memo: HashMap::new(),
            nodes: Vec::new(),
        }
    }

    fn moves(&self, pos: Option<&G::Position>, round: usize) -> Result<Vec<G::Move>, GameError> {
        match &self.forall {
            ForallSide::Search => Ok(self.game.forall_moves(pos)),
            ForallSide::Script(f) => f(pos, round).map(|m| vec![m]).map_err(|e| GameError::Script { round, message: e }),
        }
    }

    fn push(&mut self, pos: Option<&G::Position>, round: usize, winner: Winner, kind: CertKind<G::Move>) -> usize {
        self.nodes.push(CertNode {
            pos: pos.cloned(),
            round,
            winner,
            kind,
        });
        self.nodes.len() - 1
    }

    /// Value of `pos` with `round` moves already made: the winner, the
    /// depth and the certificate node.
    pub fn value(&mut self, pos: Option<&G::Position>, round: usize) -> Result<(Winner, usize, usize), GameError> {
        let key = pos.map(|p| (self.game.key(p), round));
        if let Some(k) = &key {
            if let Some(&v) = self.memo.get(k) {
                return Ok(v);
            }
        }
        self.states += 1;
        if self.states > self.budget {
            return Err(GameError::Budget { states: self.states });
        }
        let out = if round >= self.rounds {
            (Winner::Exists, round, self.push(pos, round, Winner::Exists, CertKind::Survived))
        } else {
            let moves = self.moves(pos, round)?;
            if moves.is_empty() {
                (Winner::Exists, round, self.push(pos, round, Winner::Exists, CertKind::NoMove))
            } else {
                self.choose(pos, round, moves)?
            }
        };
        if let Some(k) = key {
            self.memo.insert(k, out);
        }
        Ok(out)
    }

    fn choose(&mut self, pos: Option<&G::Position>, round: usize, moves: Vec<G::Move>) -> Result<(Winner, usize, usize), GameError> {
        let mut answers = Vec::new();
        let mut survived = round + 1;
        let game = self.game;
        for mv in moves {
            let mut children = Vec::new();
            let mut escape = None;
            let mut worst = round + 1;
            let mut failure = None;
            let mut k = 0;
            game.for_each_reply(pos, &mv, &mut |r| {
                match self.value(Some(&r), round + 1) {
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                    Ok((Winner::Exists, d, node)) => {
                        escape = Some((k, d, node));
                        return false;
                    }
                    Ok((Winner::ForAll, d, node)) => {
                        worst = worst.max(d);
                        children.push(node);
                    }
                }
                k += 1;
                true
            });
            if let Some(e) = failure {
                return Err(e);
            }
            match escape {
                None => {
                    let node = self.push(pos, round, Winner::ForAll, CertKind::ForallWins { mv, replies: children });
                    return Ok((Winner::ForAll, worst, node));
                }
                Some((k, d, node)) => {
                    survived = survived.max(d);
                    answers.push((mv, k, node));
                }
            }
        }
        let node = self.push(pos, round, Winner::Exists, CertKind::ExistsWins { answers });
        Ok((Winner::Exists, survived, node))
    }

    pub fn states(&self) -> u64 {
        self.states
    }

    pub fn into_result(self, root: (Winner, usize, usize)) -> SolveResult<G::Position, G::Move> {
        SolveResult {
            winner: root.0,
            depth: root.1,
            states: self.states,
            certificate: Certificate { nodes: self.nodes, root: root.2 },
        }
    }
}

/// Exact minimax from the empty board over `rounds` rounds, memoized on
/// `(key, round)`. Deterministic.
pub fn solve<G: Game>(game: &G, forall: ForallSide<'_, G>, rounds: usize, budget: u64) -> Result<SolveResult<G::Position, G::Move>, GameError> {
    let mut s = Solver::new(game, forall, rounds, budget);
    let root = s.value(None, 0)?;
    Ok(s.into_result(root))
}

/// Check every node of a certificate on its own: moves are legal, the
/// answers listed are exactly `∃`'s answers (for `∀` wins) or one of them
/// (for `∃` wins), and children carry the key and round of the answer.
pub fn verify_certificate<G: Game>(game: &G, forall: &ForallSide<'_, G>, rounds: usize, cert: &Certificate<G::Position, G::Move>) -> Result<(), String> {
    let key_of = |node: &CertNode<G::Position, G::Move>| node.pos.as_ref().map(|p| game.key(p));
    for (id, node) in cert.nodes.iter().enumerate() {
        let pos = node.pos.as_ref();
        let legal = |mv: &G::Move| -> bool {
            match forall {
                ForallSide::Search => game.forall_moves(pos).contains(mv),
                ForallSide::Script(f) => f(pos, node.round).is_ok_and(|m| &m == mv),
            }
        };
        let child_ok = |child: usize, reply: &G::Position, want: Winner| -> bool {
            let c = &cert.nodes[child];
            c.round == node.round + 1 && c.winner == want && key_of(c) == Some(game.key(reply))
        };
        match &node.kind {
            CertKind::Survived => {
                if node.round < rounds || node.winner != Winner::Exists {
                    return Err(format!("node {id}: survival claimed at round {}", node.round));
                }
            }
            CertKind::NoMove => {
                let none = match forall {
                    ForallSide::Search => game.forall_moves(pos).is_empty(),
                    ForallSide::Script(_) => false,
                };
                if !none {
                    return Err(format!("node {id}: ∀ has a move"));
                }
            }
            CertKind::ForallWins { mv, replies } => {
                if !legal(mv) {
                    return Err(format!("node {id}: illegal move {mv:?}"));
                }
                let actual = game.replies(pos, mv);
                if actual.len() != replies.len() || !actual.iter().zip(replies).all(|(r, &c)| child_ok(c, r, Winner::ForAll)) {
                    return Err(format!("node {id}: answers do not match"));
                }
            }
            CertKind::ExistsWins { answers } => {
                let moves: Vec<G::Move> = match forall {
                    ForallSide::Search => game.forall_moves(pos),
                    ForallSide::Script(f) => vec![f(pos, node.round).map_err(|e| format!("node {id}: {e}"))?],
                };
                if moves.len() != answers.len() {
                    return Err(format!("node {id}: {} moves, {} answers", moves.len(), answers.len()));
                }
                for (mv, (amv, k, child)) in moves.iter().zip(answers) {
                    let actual = game.replies(pos, mv);
                    if mv != amv || !actual.get(*k).is_some_and(|r| child_ok(*child, r, Winner::Exists)) {
                        return Err(format!("node {id}: bad answer to {mv:?}"));
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct TranscriptRound<M> {
    pub round: usize,
    pub forall: M,
    /// `∃`'s answer, or `None` when stuck.
    pub exists: Option<serde_json::Value>,
    pub key: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Transcript<M> {
    pub rounds: Vec<TranscriptRound<M>>,
    /// `None` for a zero-round game.
    pub winner: Option<Winner>,
}

fn hex(bytes: &[u8]) -> String {
    use std::fmt::Write;
    let mut s = String::with_capacity(2 * bytes.len());
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Play one game move by move. Searching sides consult an exact solver.
pub fn play<G: Game>(game: &G, forall: ForallSide<'_, G>, exists: ExistsSide<'_, G>, rounds: usize, budget: u64) -> Result<Transcript<G::Move>, GameError> {
    let mut transcript = Transcript { rounds: Vec::new(), winner: None };
    if rounds == 0 {
        return Ok(transcript);
    }
    let script = match &forall {
        ForallSide::Script(f) => Some(*f),
        ForallSide::Search => None,
    };
    let mut solver = Solver::new(
        game,
        match script {
            Some(f) => ForallSide::Script(f),
            None => ForallSide::Search,
        },
        rounds,
        budget,
    );
    let mut pos: Option<G::Position> = None;
    for round in 0..rounds {
        let mv = match script {
            Some(f) => f(pos.as_ref(), round).map_err(|e| GameError::Script { round, message: e })?,
            None => {
                let moves = game.forall_moves(pos.as_ref());
                let mut pick = None;
                for mv in &moves {
                    let replies = game.replies(pos.as_ref(), mv);
                    let mut wins = true;
                    for r in &replies {
                        if solver.value(Some(r), round + 1)?.0 == Winner::Exists {
                            wins = false;
                            break;
                        }
                    }
                    if wins {
                        pick = Some(mv.clone());
                        break;
                    }
                }
                match pick.or_else(|| moves.first().cloned()) {
                    Some(m) => m,
                    None => {
                        transcript.winner = Some(Winner::Exists);
                        return Ok(transcript);
                    }
                }
            }
        };
        let reply = match &exists {
            ExistsSide::Script(f) => f(pos.as_ref(), &mv),
            ExistsSide::Search => {
                let replies = game.replies(pos.as_ref(), &mv);
                let mut pick = None;
                for r in &replies {
                    if solver.value(Some(r), round + 1)?.0 == Winner::Exists {
                        pick = Some(r.clone());
                        break;
                    }
                }
                pick.or_else(|| replies.into_iter().next())
            }
        };
        let stuck = reply.is_none();
        transcript.rounds.push(TranscriptRound {
            round,
            forall: mv,
            exists: reply.as_ref().map(|r| game.describe(r)),
            key: reply.as_ref().map(|r| hex(&game.key(r))),
        });
        if stuck {
            transcript.winner = Some(Winner::ForAll);
            return Ok(transcript);
        }
        pos = reply;
    }
    transcript.winner = Some(Winner::Exists);
    Ok(transcript)
}
