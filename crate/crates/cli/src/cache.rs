//! On-disk straightening tables, keyed by `(n, λ)`, in the directory named
//! by `SCHUR_LATTICE_CACHE`.

use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};

use schur_lattice::schur::{Realization, SchurModule, StraighteningTable};
use schur_lattice::{Partition, Result};

pub const ENV_VAR: &str = "SCHUR_LATTICE_CACHE";

static SEQ: AtomicU64 = AtomicU64::new(0);

fn path(n: usize, lambda: &Partition) -> Option<PathBuf> {
    let dir = std::env::var_os(ENV_VAR)?;
    let parts: Vec<String> = lambda.parts().iter().map(usize::to_string).collect();
    Some(PathBuf::from(dir).join(format!("n{n}-l{}.json", parts.join("_"))))
}

/// The module, seeded from a cached table when one is readable.
pub fn load(n: usize, lambda: &Partition, realization: Realization) -> Result<SchurModule> {
    if let Some(p) = path(n, lambda) {
        if let Ok(text) = fs::read_to_string(&p) {
            match serde_json::from_str::<StraighteningTable>(&text) {
                Ok(table) => return SchurModule::with_table(n, lambda.clone(), realization, &table),
                Err(e) => eprintln!("ignoring unreadable cache file {}: {e}", p.display()),
            }
        }
    }
    SchurModule::with_realization(n, lambda.clone(), realization)
}

/// Writes the module's table back; failures only warn.
pub fn store(module: &SchurModule) {
    let Some(p) = path(module.n(), module.shape()) else {
        return;
    };
    let table = module.export_table();
    if table.entries.is_empty() {
        return;
    }
    let write = || -> std::io::Result<()> {
        if let Some(dir) = p.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = p.with_extension(format!("{}.{}.tmp", std::process::id(), SEQ.fetch_add(1, Ordering::Relaxed)));
        fs::write(&tmp, serde_json::to_vec(&table)?)?;
        fs::rename(&tmp, &p)
    };
    if let Err(e) = write() {
        eprintln!("could not write cache file {}: {e}", p.display());
    }
}
