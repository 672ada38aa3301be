use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use surfcoh_core::code::build_named_code;
use surfcoh_core::graph::isomorphic;
use surfcoh_core::{classify, generate_code, Error, LatticeFamily, SurfaceCode};

use crate::io::{read_code, write_json};

#[derive(Subcommand)]
pub enum LatticeCmd {
    /// Generate a code and write it as JSON.
    Gen {
        #[arg(long)]
        family: LatticeFamily,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a code and print its summary.
    Info(Source),
    /// Dual code: the Z-stabilizer graph replaced by its embedded dual.
    Dual {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also check that dualizing twice gives back the original graph.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Args)]
pub struct Source {
    /// Code JSON written by `lattice gen`.
    #[arg(long, conflicts_with_all = ["family", "size"])]
    code: Option<PathBuf>,
    #[arg(long, requires = "size")]
    family: Option<LatticeFamily>,
    #[arg(long, requires = "family")]
    size: Option<usize>,
}

impl Source {
    pub fn load(&self) -> Result<SurfaceCode> {
        let code = match (&self.code, self.family, self.size) {
            (Some(p), _, _) => read_code(p)?,
            (None, Some(f), Some(s)) => generate_code(f, s)?,
            _ => return Err(Error::InvalidParameter("give --code or --family with --size".into()).into()),
        };
        code.check()?;
        if classify(&code) != code.parity_class {
            return Err(Error::Validation(format!("stored class {:?} disagrees with the stabilizers", code.parity_class)).into());
        }
        Ok(code)
    }
}

fn dual_name(family: &str) -> String {
    match family {
        "square" | "doubly-odd" | "custom" => family.to_string(),
        f => f.strip_prefix("dual-").map_or_else(|| format!("dual-{f}"), str::to_string),
    }
}

fn weight_histogram(stabs: &[Vec<usize>]) -> String {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for s in stabs {
        *h.entry(s.len()).or_default() += 1;
    }
    h.iter().map(|(w, c)| format!("{w}:{c}")).collect::<Vec<_>>().join(" ")
}

pub fn run(cmd: LatticeCmd) -> Result<()> {
    match cmd {
        LatticeCmd::Gen { family, size, out } => {
            let code = generate_code(family, size)?;
            write_json(out.as_deref(), &code)
        }
        LatticeCmd::Info(src) => {
            let code = src.load()?;
            println!("family {}", code.family);
            println!("size {}", code.size);
            println!("N {}", code.n);
            println!("z_distance {}", code.z_distance());
            println!("x_distance {}", code.x_distance());
            println!("z_stabilizers {} weights {}", code.num_z(), weight_histogram(&code.z_stabilizers));
            println!("x_stabilizers {} weights {}", code.num_x(), weight_histogram(&code.x_stabilizers));
            println!("logical_z_weight {}", code.logical_z.len());
            println!("class {:?}", code.parity_class);
            Ok(())
        }
        LatticeCmd::Dual { source, out, check } => {
            let code = source.load()?;
            let g = &code.embedding;
            let d = g.dual()?;
            if check {
                let dd = d.dual()?;
                if !isomorphic(g, &dd, true) {
                    return Err(Error::Validation("dual of the dual is not isomorphic to the original".into()).into());
                }
                eprintln!("dual(dual) isomorphic to the original");
            }
            let dual = build_named_code(&d, &dual_name(&code.family), code.size)?;
            write_json(out.as_deref(), &dual)
        }
    }
}
