//! Seeded uniform reference traces.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ConfigError;
use crate::types::{Access, AccessKind, PageId};

/// Parameters of a uniformly random workload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkloadSpec {
    /// Unique page indexes; pages are drawn from `0..num_indexes`.
    pub num_indexes: u32,
    pub num_refs: u64,
    pub seed: u64,
    pub write_probability: f64,
}

impl WorkloadSpec {
    pub fn new(num_indexes: u32, num_refs: u64, seed: u64) -> Self {
        WorkloadSpec {
            num_indexes,
            num_refs,
            seed,
            write_probability: 0.0,
        }
    }

    pub fn with_write_probability(mut self, p: f64) -> Self {
        self.write_probability = p;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_indexes == 0 {
            return Err(ConfigError::NoIndexes);
        }
        if !(0.0..=1.0).contains(&self.write_probability) {
            return Err(ConfigError::WriteProbability(self.write_probability));
        }
        Ok(())
    }
}

/// An ordered sequence of accesses; `sequence` equals the access's position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceTrace {
    accesses: Vec<Access>,
}

impl ReferenceTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// A read-only trace over the given page numbers.
    pub fn from_pages<I: IntoIterator<Item = u32>>(pages: I) -> Self {
        let mut t = Self::new();
        for p in pages {
            t.push(PageId(p), AccessKind::Read);
        }
        t
    }

    pub fn push(&mut self, page: PageId, kind: AccessKind) {
        let sequence = self.accesses.len() as u64;
        self.accesses.push(Access {
            page,
            kind,
            sequence,
        });
    }

    pub fn len(&self) -> usize {
        self.accesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accesses.is_empty()
    }

    pub fn accesses(&self) -> &[Access] {
        &self.accesses
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Access> {
        self.accesses.iter()
    }

    /// One past the largest page number referenced, 0 for an empty trace.
    pub fn index_bound(&self) -> u32 {
        self.accesses
            .iter()
            .map(|a| a.page.0 + 1)
            .max()
            .unwrap_or(0)
    }
}

impl<'a> IntoIterator for &'a ReferenceTrace {
    type Item = &'a Access;
    type IntoIter = core::slice::Iter<'a, Access>;

    fn into_iter(self) -> Self::IntoIter {
        self.accesses.iter()
    }
}

/// Draws `num_refs` pages independently and uniformly from `0..num_indexes`
/// using ChaCha8 seeded from `seed`.
///
/// Each access consumes one page draw followed by one `f64` draw for the
/// read/write decision, so the page sequence for a seed does not depend on
/// `write_probability`.
pub fn generate_trace(spec: &WorkloadSpec) -> Result<ReferenceTrace, ConfigError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut trace = ReferenceTrace {
        accesses: Vec::with_capacity(spec.num_refs.min(1 << 24) as usize),
    };
    for _ in 0..spec.num_refs {
        let page = PageId(rng.random_range(0..spec.num_indexes));
        let kind = if rng.random::<f64>() < spec.write_probability {
            AccessKind::Write
        } else {
            AccessKind::Read
        };
        trace.push(page, kind);
    }
    Ok(trace)
}
