use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;

use super::{enumerate_simple_forms, QuadForm};

/// Directory for persisted simple-form lists. Unset disables disk caching.
pub const SIMPLE_FORM_CACHE_ENV: &str = "LOCALPOLY_CACHE_DIR";

type Store = Mutex<HashMap<i128, Arc<Vec<QuadForm>>>>;

fn store() -> &'static Store {
    static STORE: OnceLock<Store> = OnceLock::new();
    STORE.get_or_init(Default::default)
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(SIMPLE_FORM_CACHE_ENV).map(PathBuf::from).filter(|p| !p.as_os_str().is_empty())
}

/// Level-free simple forms of `Δ`, memoized in process and optionally on disk.
/// The list depends on `Δ` only; level filtering happens after transport.
pub fn simple_forms_cached(delta: i128) -> Result<Arc<Vec<QuadForm>>> {
    if let Some(hit) = store().lock().expect("cache poisoned").get(&delta) {
        return Ok(hit.clone());
    }
    let forms = Arc::new(load_or_build(delta)?);
    // A racing insert computes the same list, so either copy may win.
    let mut guard = store().lock().expect("cache poisoned");
    Ok(guard.entry(delta).or_insert(forms).clone())
}

fn load_or_build(delta: i128) -> Result<Vec<QuadForm>> {
    let Some(dir) = cache_dir() else {
        return enumerate_simple_forms(delta, 1);
    };
    let path = dir.join(format!("simple-forms-{delta}.json"));
    if let Ok(bytes) = std::fs::read(&path) {
        if let Ok(forms) = serde_json::from_slice::<Vec<QuadForm>>(&bytes) {
            if forms.iter().all(|f| f.disc() == delta) {
                return Ok(forms);
            }
        }
    }
    let forms = enumerate_simple_forms(delta, 1)?;
    std::fs::create_dir_all(&dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec(&forms)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(forms)
}
