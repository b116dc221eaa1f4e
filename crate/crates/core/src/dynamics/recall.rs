use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{PlayerPayoffs, ProfileSpace};

use super::{ActionDistribution, PlayerStrategy, StrategyMapping};

/// Runs a mapping with a longer recall than it needs. The base strategy sees
/// only the most recent profiles it asks for.
#[derive(Clone)]
pub struct ExtendedRecall {
    base: Arc<dyn StrategyMapping>,
    recall: usize,
}

impl ExtendedRecall {
    pub fn new(base: Arc<dyn StrategyMapping>, recall: usize) -> Result<Self> {
        if recall < base.recall() {
            return Err(Error::Unsupported(format!(
                "{} needs recall {}, cannot run with recall {recall}",
                base.name(),
                base.recall()
            )));
        }
        Ok(Self { base, recall })
    }
}

struct ExtendedPlayer {
    skip: usize,
    base: Box<dyn PlayerStrategy>,
}

impl PlayerStrategy for ExtendedPlayer {
    fn next(&self, state: &[usize]) -> ActionDistribution {
        self.base.next(&state[self.skip..])
    }
}

impl StrategyMapping for ExtendedRecall {
    fn name(&self) -> String {
        if self.recall == self.base.recall() {
            self.base.name()
        } else {
            format!("{}@r{}", self.base.name(), self.recall)
        }
    }

    fn recall(&self) -> usize {
        self.recall
    }

    fn is_deterministic(&self) -> bool {
        self.base.is_deterministic()
    }

    fn supports(&self, space: &ProfileSpace) -> Result<()> {
        self.base.supports(space)
    }

    fn player_strategy(&self, payoffs: PlayerPayoffs<'_>) -> Result<Box<dyn PlayerStrategy>> {
        Ok(Box::new(ExtendedPlayer {
            skip: self.recall - self.base.recall(),
            base: self.base.player_strategy(payoffs)?,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::decide_success;
    use crate::dynamics::{CanonicalH, StrategyVector};
    use crate::fixtures::lemma10_game;

    #[test]
    fn longer_recall_keeps_the_outcome() {
        let g = lemma10_game();
        let f = ExtendedRecall::new(Arc::new(CanonicalH), 2).unwrap();
        assert_eq!(f.name(), "h@r2");
        let s = StrategyVector::build(&f, &g).unwrap();
        let v = decide_success(&s, &g, 1 << 20).unwrap();
        assert_eq!(v.outcome, crate::analysis::Outcome::Fails);
        assert_eq!(v.recall, 2);
        assert!(ExtendedRecall::new(Arc::new(crate::dynamics::QueryProtocol3), 2).is_err());
    }
}
