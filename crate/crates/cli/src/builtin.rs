//! Suites shipped with the binary.

use anyhow::{bail, Result};

use hardy_core::QuadConfig;

use crate::config::{RunSpec, SuiteConfig};

pub const BUILTINS: &[&str] = &["paper-full", "identities-only", "smoke"];

fn seeded(tag: &str, seed: u64, samples: usize) -> RunSpec {
    let mut r = RunSpec::new(tag);
    r.quadrature = Some(QuadConfig::mc(samples, seed));
    r
}

/// One run per verified statement, with default parameters.
fn full() -> Vec<RunSpec> {
    let mut runs = vec![seeded("picone", 1, 200_000)];
    let mut hardy = seeded("hardy", 2, 200_000);
    hardy.group = Some("euclidean:4".into());
    hardy.p = Some(vec![1.5, 2.0, 3.0, 2.0]);
    hardy.u = Some("bump:center=1,0.9,1.1,1;radius=0.5".into());
    hardy.domain = Some(crate::config::DomainSpec {
        lo: Some(vec![0.4; 4]),
        hi: Some(vec![1.6; 4]),
        ..Default::default()
    });
    runs.push(hardy);
    for (i, tag) in [
        "rellich",
        "multi_singular_hardy",
        "uncertainty",
        "harmonicity",
        "lemma_3_1",
        "many_particle",
        "rho_identities",
        "ground_state",
        "total_separation",
        "exponential_weight",
        "ibp_identity",
    ]
    .into_iter()
    .enumerate()
    {
        let samples = if matches!(tag, "ground_state" | "total_separation") { 500_000 } else { 200_000 };
        runs.push(seeded(tag, 3 + i as u64, samples));
    }
    runs
}

pub fn builtin(name: &str) -> Result<SuiteConfig> {
    let runs = match name {
        "paper-full" => full(),
        "identities-only" => ["picone", "rho_identities", "ground_state", "total_separation", "ibp_identity"]
            .iter()
            .filter_map(|t| full().into_iter().find(|r| r.theorem == *t))
            .collect(),
        "smoke" => {
            let mut picone = seeded("picone", 1, 200_000);
            picone.points = Some(1000);
            picone.pairs = Some(3);
            let hardy = seeded("hardy", 2, 50_000);
            let mut rho = seeded("rho_identities", 3, 200_000);
            rho.points = Some(200);
            vec![picone, hardy, rho]
        }
        _ => bail!("unknown builtin suite `{name}`; available: {}", BUILTINS.join(", ")),
    };
    Ok(SuiteConfig { runs })
}
