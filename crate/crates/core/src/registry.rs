use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::classical_cones::{horn_system, lr_mn_system, ConeId, ConeKind};
use crate::error::Result;
use crate::involution_cones::{a_system, b_system, e1_system, e2_system, s_system, sing_system, so_odd_system, t_system};
use crate::polyhedra::InequalitySystem;

/// Generates the system for any supported cone.
pub fn generate(cone: &ConeId) -> Result<InequalitySystem> {
    cone.validate()?;
    let p = &cone.params;
    let v = cone.variant;
    match cone.kind {
        ConeKind::Horn => horn_system(p[0], v),
        ConeKind::LrMn => lr_mn_system(p[0], p[1], v),
        ConeKind::E1 => e1_system(p[0], v),
        ConeKind::E2 => e2_system(p[0], v),
        ConeKind::Sing => sing_system(p[0], p[1], v),
        ConeKind::SoOdd => so_odd_system(p[0], v),
        ConeKind::A => a_system(p[0], p[1], v),
        ConeKind::B => b_system(p[0], v),
        ConeKind::S => s_system(p[0], p[1], v),
        ConeKind::T => t_system(p[0], p[1], v),
    }
}

/// Memoized [`generate`].
pub fn cached(cone: &ConeId) -> Result<Arc<InequalitySystem>> {
    static CACHE: OnceLock<Mutex<HashMap<ConeId, Arc<InequalitySystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Mutex::default);
    if let Some(sys) = cache.lock().expect("system cache poisoned").get(cone) {
        return Ok(Arc::clone(sys));
    }
    let sys = Arc::new(generate(cone)?);
    cache
        .lock()
        .expect("system cache poisoned")
        .insert(cone.clone(), Arc::clone(&sys));
    Ok(sys)
}
