//! The standard optimal algorithm and the mistake-bound game.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::class::HypothesisClass;
use crate::dims::LdimSolver;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// SOA prediction on `x`: the label whose restriction keeps the larger
/// Littlestone dimension, 1 on ties.
pub fn soa_predict(version_space: &HypothesisClass, x: usize, limits: &Limits) -> Result<bool> {
    if version_space.is_empty() {
        return Err(Error::EmptyClass);
    }
    version_space.check_point(x)?;
    let mut solver = LdimSolver::new(version_space, limits);
    predict_with(&mut solver, version_space, &version_space.all(), x)
}

fn predict_with(
    solver: &mut LdimSolver<'_>,
    class: &HypothesisClass,
    vs: &FixedBitSet,
    x: usize,
) -> Result<bool> {
    let zero = solver.value(&class.split(vs, x, false))?;
    let one = solver.value(&class.split(vs, x, true))?;
    Ok(one >= zero)
}

/// Mistakes an adversary forces against the best learner, by direct minimax:
/// the adversary picks a point, the learner predicts, the adversary reveals a
/// label consistent with some remaining hypothesis.
pub fn game_value(class: &HypothesisClass, limits: &Limits) -> Result<usize> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    let mut game = Game::new(class, limits);
    game.value(&class.all())
}

struct Game<'a> {
    class: &'a HypothesisClass,
    memo: HashMap<FixedBitSet, usize>,
    visited: u64,
    max_states: u64,
}

impl<'a> Game<'a> {
    fn new(class: &'a HypothesisClass, limits: &Limits) -> Self {
        Game {
            class,
            memo: HashMap::new(),
            visited: 0,
            max_states: limits.max_states,
        }
    }

    fn value(&mut self, vs: &FixedBitSet) -> Result<usize> {
        if vs.count_ones(..) <= 1 {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(vs) {
            return Ok(v);
        }
        self.visited += 1;
        if self.visited > self.max_states {
            return Err(Error::budget("game states", self.visited, self.max_states));
        }
        let mut best = 0;
        for x in 0..self.class.domain_size() {
            if let Some(v) = self.round_value(vs, x)? {
                best = best.max(v);
            }
        }
        self.memo.insert(vs.clone(), best);
        Ok(best)
    }

    /// Value of presenting `x`, or `None` when every hypothesis agrees on it
    /// (such a round changes nothing).
    fn round_value(&mut self, vs: &FixedBitSet, x: usize) -> Result<Option<usize>> {
        let zeros = self.class.split(vs, x, false);
        let ones = self.class.split(vs, x, true);
        if zeros.is_clear() || ones.is_clear() {
            return Ok(None);
        }
        let v0 = self.value(&zeros)?;
        let v1 = self.value(&ones)?;
        // Learner picks the prediction, adversary the worse label for it.
        let predict_zero = v0.max(v1 + 1);
        let predict_one = (v0 + 1).max(v1);
        Ok(Some(predict_zero.min(predict_one)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Adversary {
    /// Plays the minimax-optimal point and label each round.
    Optimal,
    /// Reveals the given `(point, label)` pairs in order.
    Scripted(Vec<(usize, bool)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub point: usize,
    pub prediction: bool,
    pub label: bool,
    /// Hypotheses consistent with everything revealed so far.
    pub version_space: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameRecord {
    pub mistakes: usize,
    pub rounds: Vec<Round>,
}

/// Plays SOA against `adversary` until the version space is a singleton, the
/// script ends, or (for the optimal adversary) no point splits it.
pub fn run_game(
    class: &HypothesisClass,
    adversary: &Adversary,
    limits: &Limits,
) -> Result<GameRecord> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    let mut solver = LdimSolver::new(class, limits);
    let mut vs = class.all();
    let mut record = GameRecord {
        mistakes: 0,
        rounds: Vec::new(),
    };
    match adversary {
        Adversary::Scripted(script) => {
            for (round, &(x, label)) in script.iter().enumerate() {
                if vs.count_ones(..) <= 1 {
                    break;
                }
                class.check_point(x)?;
                let prediction = predict_with(&mut solver, class, &vs, x)?;
                let next = class.split(&vs, x, label);
                if next.is_clear() {
                    return Err(Error::Unrealizable { round: round + 1 });
                }
                vs = next;
                record.push(x, prediction, label, vs.count_ones(..));
            }
        }
        Adversary::Optimal => {
            let mut game = Game::new(class, limits);
            while vs.count_ones(..) > 1 {
                let mut choice: Option<(usize, usize)> = None;
                for x in 0..class.domain_size() {
                    if let Some(v) = game.round_value(&vs, x)? {
                        if choice.is_none_or(|(_, b)| v > b) {
                            choice = Some((x, v));
                        }
                    }
                }
                let Some((x, _)) = choice else { break };
                let prediction = predict_with(&mut solver, class, &vs, x)?;
                // Contradict the learner when that is at least as valuable.
                let wrong = class.split(&vs, x, !prediction);
                let right = class.split(&vs, x, prediction);
                let label = if game.value(&wrong)? + 1 >= game.value(&right)? {
                    !prediction
                } else {
                    prediction
                };
                vs = if label == prediction { right } else { wrong };
                record.push(x, prediction, label, vs.count_ones(..));
            }
        }
    }
    Ok(record)
}

impl GameRecord {
    fn push(&mut self, point: usize, prediction: bool, label: bool, version_space: usize) {
        if prediction != label {
            self.mistakes += 1;
        }
        self.rounds.push(Round {
            point,
            prediction,
            label,
            version_space,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::make_class;
    use crate::constructions::thresholds_class;
    use crate::dims::ldim;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn singleton_behaviour() {
        let c = make_class(3, &["101"]).unwrap();
        assert!(soa_predict(&c, 0, &limits()).unwrap());
        assert!(!soa_predict(&c, 1, &limits()).unwrap());
        assert_eq!(game_value(&c, &limits()).unwrap(), 0);
        let script = Adversary::Scripted(vec![(0, true), (1, false)]);
        assert_eq!(run_game(&c, &script, &limits()).unwrap().mistakes, 0);
    }

    #[test]
    fn full_class() {
        for m in 1..=4 {
            let full = HypothesisClass::full(m).unwrap();
            for x in 0..m {
                assert!(soa_predict(&full, x, &limits()).unwrap());
            }
            assert_eq!(game_value(&full, &limits()).unwrap(), m);
            let rec = run_game(&full, &Adversary::Optimal, &limits()).unwrap();
            assert_eq!(rec.mistakes, m);
            assert_eq!(rec.rounds.last().unwrap().version_space, 1);
        }
    }

    #[test]
    fn thresholds_prediction_matches_restrictions() {
        let th = thresholds_class(4).unwrap();
        let zero = ldim(&th.restrict(1, false).unwrap(), &limits()).unwrap().0;
        let one = ldim(&th.restrict(1, true).unwrap(), &limits()).unwrap().0;
        // {f_0} versus {f_1, f_2, f_3}.
        assert_eq!((zero, one), (0, 1));
        assert!(soa_predict(&th, 1, &limits()).unwrap());
        assert_eq!(game_value(&th, &limits()).unwrap(), 2);
    }

    #[test]
    fn unrealizable_script_is_rejected() {
        let c = make_class(2, &["00", "01"]).unwrap();
        let script = Adversary::Scripted(vec![(1, true), (0, true)]);
        // After the first round only "01" remains, so the game stops early.
        assert_eq!(run_game(&c, &script, &limits()).unwrap().rounds.len(), 1);
        let c = make_class(2, &["00", "01", "11"]).unwrap();
        let script = Adversary::Scripted(vec![(0, false), (0, true)]);
        assert_eq!(
            run_game(&c, &script, &limits()),
            Err(Error::Unrealizable { round: 2 })
        );
    }

    #[test]
    fn out_of_range_and_empty() {
        let c = make_class(2, &["00", "01"]).unwrap();
        assert!(matches!(
            soa_predict(&c, 2, &limits()),
            Err(Error::PointOutOfRange { .. })
        ));
        let script = Adversary::Scripted(vec![(5, true)]);
        assert!(run_game(&c, &script, &limits()).is_err());
    }
}
