use std::fmt;
use std::str::FromStr;

use casqmc_core::estimate::Sampler;
use casqmc_core::rng;

use crate::error::HarnessError;

/// Estimator variants compared in the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mc,
    RqmcStd,
    RqmcPca,
    RqmcAs,
    PreStd,
    PrePca,
    PreCas,
    /// Reaction network only: last-step direction chosen by active subspace.
    PreAs,
}

impl Method {
    pub const FINANCE: [Method; 7] =
        [Method::Mc, Method::RqmcStd, Method::RqmcPca, Method::RqmcAs, Method::PreStd, Method::PrePca, Method::PreCas];
    pub const NETWORK: [Method; 4] = [Method::RqmcStd, Method::RqmcAs, Method::PreStd, Method::PreAs];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Mc => "MC",
            Method::RqmcStd => "RQMC_STD",
            Method::RqmcPca => "RQMC_PCA",
            Method::RqmcAs => "RQMC_AS",
            Method::PreStd => "PRE_STD",
            Method::PrePca => "PRE_PCA",
            Method::PreCas => "PRE_CAS",
            Method::PreAs => "PRE_AS",
        }
    }

    /// Column names used for the reaction-network table.
    pub fn network_label(self) -> &'static str {
        match self {
            Method::RqmcStd => "RQMC",
            Method::RqmcAs => "RQMC+AS",
            Method::PreStd => "preint",
            Method::PreAs => "preint+AS",
            other => other.tag(),
        }
    }

    pub fn sampler(self) -> Sampler {
        if self == Method::Mc {
            Sampler::Mc
        } else {
            Sampler::Rqmc
        }
    }

    pub fn is_preintegrated(self) -> bool {
        matches!(self, Method::PreStd | Method::PrePca | Method::PreCas | Method::PreAs)
    }

    /// Stream tag for replicate seeds, so adding a method never changes
    /// the draws of another.
    pub fn stream(self) -> u64 {
        rng::mix64(rng::stream::REPLICATE ^ self as u64)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace(['-', ' '], "_");
        Ok(match key.as_str() {
            "MC" => Method::Mc,
            "RQMC_STD" | "RQMC" => Method::RqmcStd,
            "RQMC_PCA" => Method::RqmcPca,
            "RQMC_AS" | "RQMC+AS" => Method::RqmcAs,
            "PRE_STD" | "PREINT" => Method::PreStd,
            "PRE_PCA" => Method::PrePca,
            "PRE_CAS" => Method::PreCas,
            "PRE_AS" | "PREINT+AS" => Method::PreAs,
            _ => return Err(HarnessError::Usage(format!("unknown method `{s}`"))),
        })
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, HarnessError> {
    list.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}
