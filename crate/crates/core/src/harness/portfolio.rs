use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PortfolioError {
    #[error("portfolio is empty")]
    EmptyPortfolio,
    #[error("model {0:?} has a non-finite score")]
    NonFiniteScore(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Picks the model whose summed log-likelihood of the new task's training
/// examples is highest. Ties go to the lexicographically smallest id.
pub fn select_portfolio_model(scores: &BTreeMap<String, f64>) -> Result<String, PortfolioError> {
    if let Some((id, _)) = scores.iter().find(|(_, s)| !s.is_finite()) {
        return Err(PortfolioError::NonFiniteScore(id.clone()));
    }
    let mut best: Option<(&String, f64)> = None;
    for (id, &score) in scores {
        // Iteration is in id order, so strict `>` keeps the smallest id on ties.
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((id, score));
        }
    }
    best.map(|(id, _)| id.clone()).ok_or(PortfolioError::EmptyPortfolio)
}

/// Reads `<model_id> <score>` lines; blank and `#` lines are skipped.
pub fn parse_scores(text: &str) -> Result<BTreeMap<String, f64>, PortfolioError> {
    let mut scores = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |message: &str| PortfolioError::Parse {
            line,
            message: message.to_string(),
        };
        let mut parts = raw.split_whitespace();
        let (Some(id), Some(score), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected `<model_id> <score>`"));
        };
        let score: f64 = score.parse().map_err(|_| err("score is not a number"))?;
        if scores.insert(id.to_string(), score).is_some() {
            return Err(err("duplicate model id"));
        }
    }
    Ok(scores)
}
