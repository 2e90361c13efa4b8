use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One observed entry, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Partially observed `rows x cols` matrix. Observations are sorted
/// column-major and unique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ratings {
    pub rows: usize,
    pub cols: usize,
    pub observations: Vec<Observation>,
}

impl Ratings {
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn density(&self) -> f64 {
        self.len() as f64 / (self.rows * self.cols) as f64
    }
}

/// Parses `user item rating [timestamp]` lines separated by tabs or spaces.
///
/// Ids are 1-based. Dimensions are the largest ids seen; a repeated
/// `(user, item)` keeps its last rating. Blank lines are skipped.
pub fn parse_ratings(text: &str) -> Result<Ratings> {
    let mut entries: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    let (mut rows, mut cols) = (0, 0);
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut fields = line.split_whitespace();
        let Some(user) = fields.next() else { continue };
        let err = |message: String| Error::RatingsParse {
            line: line_no,
            message,
        };
        let item = fields.next().ok_or_else(|| err("missing item id".into()))?;
        let rating = fields.next().ok_or_else(|| err("missing rating".into()))?;
        if fields.clone().count() > 1 {
            return Err(err("too many fields".into()));
        }
        let parse_id = |s: &str, what: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(err(format!("invalid {what} id {s:?}"))),
            }
        };
        let user = parse_id(user, "user")?;
        let item = parse_id(item, "item")?;
        let value: f64 = rating
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| err(format!("invalid rating {rating:?}")))?;
        rows = rows.max(user);
        cols = cols.max(item);
        entries.insert((item - 1, user - 1), value);
    }
    if entries.is_empty() {
        return Err(Error::RatingsParse {
            line: 0,
            message: "no ratings found".into(),
        });
    }
    Ok(Ratings {
        rows,
        cols,
        observations: entries
            .into_iter()
            .map(|((col, row), value)| Observation { row, col, value })
            .collect(),
    })
}

pub fn load_ratings(path: impl AsRef<Path>) -> Result<Ratings> {
    let text = std::fs::read_to_string(path)?;
    parse_ratings(&text)
}
