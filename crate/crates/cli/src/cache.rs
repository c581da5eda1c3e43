//! Persistent caches: `hallpoly.cache` and `canon.cache`.
//!
//! Both files start with a versioned header that includes a hash of the
//! algebra conventions; a file whose header does not match is ignored and
//! rewritten, so convention changes invalidate stale results automatically.
//! Writes go through a temporary file and a rename.

use cyclic_hall_core::hallalg::{
    conventions_hash, BasisConversion, CyclicQuiver, HallAlgebra, HallQuiver, LinearQuiver,
};
use cyclic_hall_core::hallcount::QPoly;
use cyclic_hall_core::induction::{Inducer, LinearPolySeed};
use cyclic_hall_core::multiseg::{Multisegment, PeriodicMultisegment};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

const POLY_HEADER: &str = "cyclic-hall hallpoly v1";
const CANON_HEADER: &str = "cyclic-hall canon v1";

/// Record-level view of the two cache files.
#[derive(Default)]
pub struct CacheStore {
    dir: Option<PathBuf>,
    /// `(algebra, M, N, P) -> poly` with every field in its text grammar.
    poly: BTreeMap<(String, String, String, String), String>,
    /// `(algebra, dv) -> (extension hash, matrix)`.
    canon: BTreeMap<(String, String), (String, String)>,
    dirty: bool,
}

impl CacheStore {
    /// Opens the store rooted at `dir`; `None` disables persistence.
    pub fn open(dir: Option<PathBuf>) -> CacheStore {
        let mut store = CacheStore {
            dir,
            ..CacheStore::default()
        };
        if let Some(d) = store.dir.clone() {
            store.load_poly(&d.join("hallpoly.cache"));
            store.load_canon(&d.join("canon.cache"));
        }
        store
    }

    fn header_ok(line: Option<&str>, expected: &str) -> bool {
        match line {
            Some(l) => {
                let mut parts = l.rsplitn(2, ' ');
                let hash = parts.next().unwrap_or("");
                let prefix = parts.next().unwrap_or("");
                prefix == expected && hash == format!("{:016x}", conventions_hash())
            }
            None => false,
        }
    }

    fn load_poly(&mut self, path: &Path) {
        let Ok(contents) = fs::read_to_string(path) else {
            return;
        };
        let mut lines = contents.lines();
        if !Self::header_ok(lines.next(), POLY_HEADER) {
            return;
        }
        for line in lines {
            let fields: Vec<&str> = line.split('|').collect();
            if fields.len() != 5 {
                continue;
            }
            self.poly.insert(
                (
                    fields[0].to_string(),
                    fields[1].to_string(),
                    fields[2].to_string(),
                    fields[3].to_string(),
                ),
                fields[4].to_string(),
            );
        }
    }

    fn load_canon(&mut self, path: &Path) {
        let Ok(contents) = fs::read_to_string(path) else {
            return;
        };
        let mut lines = contents.lines();
        if !Self::header_ok(lines.next(), CANON_HEADER) {
            return;
        }
        for line in lines {
            let fields: Vec<&str> = line.split('|').collect();
            if fields.len() != 4 {
                continue;
            }
            self.canon.insert(
                (fields[0].to_string(), fields[1].to_string()),
                (fields[2].to_string(), fields[3].to_string()),
            );
        }
    }

    /// Writes both files atomically (temp file, then rename).
    pub fn save(&self) -> std::io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let hash = format!("{:016x}", conventions_hash());

        let mut poly_out = format!("{POLY_HEADER} {hash}\n");
        for ((alg, m, n, p), poly) in &self.poly {
            poly_out.push_str(&format!("{alg}|{m}|{n}|{p}|{poly}\n"));
        }
        atomic_write(&dir.join("hallpoly.cache"), &poly_out)?;

        let mut canon_out = format!("{CANON_HEADER} {hash}\n");
        for ((alg, dv), (ext, matrix)) in &self.canon {
            canon_out.push_str(&format!("{alg}|{dv}|{ext}|{matrix}\n"));
        }
        atomic_write(&dir.join("canon.cache"), &canon_out)?;
        Ok(())
    }

    pub fn seed_cyclic(&self, alg: &mut HallAlgebra<CyclicQuiver>) {
        let id = alg.quiver.algebra_id();
        for ((rec_alg, m, n, p), poly) in &self.poly {
            if *rec_alg != id {
                continue;
            }
            let (Ok(m), Ok(n), Ok(p)) = (
                m.parse::<PeriodicMultisegment>(),
                n.parse::<PeriodicMultisegment>(),
                p.parse::<PeriodicMultisegment>(),
            ) else {
                continue;
            };
            let Ok(poly) = poly.parse::<QPoly>() else {
                continue;
            };
            if m.period() == alg.quiver.m {
                alg.table.insert_poly((m, n, p), poly);
            }
        }
        self.seed_canon(alg, &id);
    }

    pub fn seed_linear(&self, alg: &mut HallAlgebra<LinearQuiver>) {
        for ((m, n, p), poly) in self.linear_poly_seed() {
            alg.table.insert_poly((m, n, p), poly);
        }
        let id = alg.quiver.algebra_id();
        self.seed_canon(alg, &id);
    }

    /// All linear-quiver Hall polynomials on file (they are window
    /// independent, so any linear algebra may take them).
    pub fn linear_poly_seed(&self) -> LinearPolySeed {
        let mut out = Vec::new();
        for ((rec_alg, m, n, p), poly) in &self.poly {
            if rec_alg != "inf" {
                continue;
            }
            let (Ok(m), Ok(n), Ok(p)) = (
                m.parse::<Multisegment>(),
                n.parse::<Multisegment>(),
                p.parse::<Multisegment>(),
            ) else {
                continue;
            };
            let Ok(poly) = poly.parse::<QPoly>() else {
                continue;
            };
            out.push(((m, n, p), poly));
        }
        out
    }

    fn seed_canon<Q: HallQuiver>(&self, alg: &mut HallAlgebra<Q>, id: &str) {
        let records: Vec<(String, String, String)> = self
            .canon
            .iter()
            .filter(|((rec_alg, _), _)| rec_alg == id)
            .map(|((_, dv), (ext, matrix))| (dv.clone(), ext.clone(), matrix.clone()))
            .collect();
        for (dv_str, ext, matrix) in records {
            let Some(dv) = parse_dv(&dv_str) else { continue };
            if dv.len() != alg.quiver.vertex_count() {
                continue;
            }
            let labels = alg.sorted_labels(&dv);
            let Ok(rows) = BasisConversion::<Q::Label>::parse_matrix(&matrix) else {
                continue;
            };
            if rows.len() != labels.len() || rows.iter().any(|r| r.len() != labels.len()) {
                continue;
            }
            let conv = BasisConversion::from_f_to_b(dv, labels, rows);
            // the stored linear-extension hash must match the recomputed one
            if format!("{:016x}", conv.extension_hash()) != ext {
                continue;
            }
            alg.insert_canonical(conv);
        }
    }

    pub fn harvest_cyclic(&mut self, alg: &HallAlgebra<CyclicQuiver>) {
        let id = alg.quiver.algebra_id();
        for ((m, n, p), poly) in alg.table.cached_polys() {
            self.record_poly(&id, &m.to_string(), &n.to_string(), &p.to_string(), poly);
        }
        self.harvest_canon(alg, &id);
    }

    pub fn harvest_linear(&mut self, alg: &HallAlgebra<LinearQuiver>) {
        for ((m, n, p), poly) in alg.table.cached_polys() {
            self.record_poly("inf", &m.to_string(), &n.to_string(), &p.to_string(), poly);
        }
        let id = alg.quiver.algebra_id();
        self.harvest_canon(alg, &id);
    }

    pub fn harvest_inducer(&mut self, ind: &Inducer) {
        self.harvest_cyclic(&ind.cyclic);
        for (_, alg) in ind.linear_algebras() {
            self.harvest_linear(alg);
        }
    }

    fn record_poly(&mut self, alg: &str, m: &str, n: &str, p: &str, poly: &QPoly) {
        let key = (alg.to_string(), m.to_string(), n.to_string(), p.to_string());
        let value = poly.to_string();
        if self.poly.get(&key) != Some(&value) {
            self.poly.insert(key, value);
            self.dirty = true;
        }
    }

    fn harvest_canon<Q: HallQuiver>(&mut self, alg: &HallAlgebra<Q>, id: &str) {
        for (dv, conv) in alg.cached_canonical() {
            let key = (id.to_string(), format_dv(dv));
            let value = (
                format!("{:016x}", conv.extension_hash()),
                conv.matrix_string(),
            );
            if self.canon.get(&key) != Some(&value) {
                self.canon.insert(key, value);
                self.dirty = true;
            }
        }
    }
}

pub fn format_dv(dv: &[u64]) -> String {
    dv.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_dv(s: &str) -> Option<Vec<u64>> {
    s.split(',')
        .map(|part| part.trim().parse::<u64>().ok())
        .collect()
}

fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}
