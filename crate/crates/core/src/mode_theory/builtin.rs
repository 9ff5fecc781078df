//! Built-in mode theories.

use super::{BuildOptions, ModeTheory, ModeTheoryError, Oracle, Presentation};

/// Returns a built-in mode theory by name.
///
/// Recognised names: `k`, `k4-free`, `t-free`, `s4-comonad`, `s4-idem`,
/// `int-cl`, `epistemic-N`, `doxastic-N` (N agents, default 2).
pub fn builtin(name: &str) -> Result<ModeTheory, ModeTheoryError> {
    let (base, agents) = split_agents(name);
    let pres = match base {
        "k" => Presentation::new().mode("m").modality("box", "m", "m"),
        "k4-free" => Presentation::new()
            .mode("m")
            .modality("box", "m", "m")
            .cell("four", &["box"], &["box", "box"]),
        "t-free" => Presentation::new()
            .mode("m")
            .modality("box", "m", "m")
            .cell("t", &["box"], &[]),
        "s4-comonad" => {
            let mut p = Presentation::new()
                .mode("m")
                .modality("box", "m", "m")
                .cell("four", &["box"], &["box", "box"])
                .cell("t", &["box"], &[]);
            p.oracle = Some(Oracle::WalkingComonad);
            let mt = p.clone().build(BuildOptions::default())?;
            // Record the coherence equations; the oracle decides them.
            let four = mt.gen_cell("four")?;
            let t = mt.gen_cell("t")?;
            let id_box = mt.id_cell(&mt.generator_path("box")?);
            let counit_left = mt.vcomp(mt.hcomp(t.clone(), id_box.clone())?, four.clone())?;
            let counit_right = mt.vcomp(mt.hcomp(id_box.clone(), t)?, four.clone())?;
            let coassoc_left = mt.vcomp(mt.hcomp(four.clone(), id_box.clone())?, four.clone())?;
            let coassoc_right = mt.vcomp(mt.hcomp(id_box.clone(), four.clone())?, four)?;
            p.cell_equations = vec![
                (counit_left, id_box.clone()),
                (counit_right, id_box),
                (coassoc_left, coassoc_right),
            ];
            p
        }
        "s4-idem" => Presentation::new()
            .mode("m")
            .modality("box", "m", "m")
            .equation(&["box", "box"], &["box"])
            .cell("t", &["box"], &[]),
        "int-cl" => Presentation::new()
            .mode("int")
            .mode("cl")
            .modality("IntProv", "int", "cl")
            .classical("cl"),
        "epistemic" => {
            let n = agents.unwrap_or(2);
            let mut p = Presentation::new().mode("m");
            for i in 1..=n {
                let k = format!("k{i}");
                p = p.modality(&k, "m", "m");
                p = p.cell(&format!("t{i}"), &[k.as_str()], &[]);
                p = p.cell(&format!("four{i}"), &[k.as_str()], &[k.as_str(), k.as_str()]);
            }
            p
        }
        "doxastic" => {
            let n = agents.unwrap_or(2);
            let mut p = Presentation::new().mode("m");
            for i in 1..=n {
                let k = format!("k{i}");
                let b = format!("b{i}");
                p = p.modality(&k, "m", "m").modality(&b, "m", "m");
                p = p.cell(&format!("aristotle{i}"), &[k.as_str()], &[b.as_str()]);
                // Introsp : B_i ⇒ K_i ∘ B_i (B applied first).
                p = p.cell(
                    &format!("introsp{i}"),
                    &[b.as_str()],
                    &[b.as_str(), k.as_str()],
                );
            }
            p
        }
        _ => return Err(ModeTheoryError::UnknownBuiltin(name.to_string())),
    };
    pres.build(BuildOptions::default())
}

fn split_agents(name: &str) -> (&str, Option<usize>) {
    if let Some((base, n)) = name.rsplit_once('-') {
        if let Ok(n) = n.parse::<usize>() {
            return (base, Some(n));
        }
    }
    (name, None)
}

#[cfg(test)]
mod tests {
    use super::super::{CellQueryResult, ModalityPath, ModeId, SearchBudget};
    use super::*;

    #[test]
    fn k_hom_set_is_box_powers() {
        let mt = builtin("k").unwrap();
        let m = ModeId::new("m");
        for n in 0..6usize {
            let p = mt
                .path_from_word(&vec!["box".to_string(); n], Some(&m))
                .unwrap();
            assert_eq!(p.len(), n);
        }
    }

    #[test]
    fn int_cl_shape() {
        let mt = builtin("int-cl").unwrap();
        let g = mt.generator("IntProv").unwrap();
        assert_eq!(g.source.name(), "int");
        assert_eq!(g.target.name(), "cl");
        assert!(mt.is_classical(&ModeId::new("cl")));
        assert!(!mt.is_classical(&ModeId::new("int")));
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(matches!(
            builtin("s5"),
            Err(ModeTheoryError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn epistemic_has_per_agent_cells() {
        let mt = builtin("epistemic-3").unwrap();
        assert!(mt.cell_generator("t3").is_some());
        assert!(mt.cell_generator("four2").is_some());
        let k1 = mt.generator_path("k1").unwrap();
        let id = super::super::ModalityPath::identity(&ModeId::new("m"));
        assert!(mt
            .cell_exists(&k1, &id, SearchBudget::default())
            .unwrap()
            .is_found());
    }

    #[test]
    fn doxastic_introspection_boundary() {
        let mt = builtin("doxastic-1").unwrap();
        let c = mt.gen_cell("introsp1").unwrap();
        let (from, to) = mt.cell_boundary(&c).unwrap();
        assert_eq!(from.word(), ["b1".to_string()]);
        assert_eq!(to.word(), ["b1".to_string(), "k1".to_string()]);
        // Knowledge implies belief: a cell k1 ⇒ b1 exists.
        let k = mt.generator_path("k1").unwrap();
        let b = mt.generator_path("b1").unwrap();
        assert!(mt
            .cell_exists(&k, &b, SearchBudget::default())
            .unwrap()
            .is_found());
    }

    #[test]
    fn s4_idem_has_safe_rewriting() {
        let mt = builtin("s4-idem").unwrap();
        assert!(mt.rewriting_is_safe());
        match mt
            .cell_exists(
                &mt.generator_path("box").unwrap(),
                &ModalityPath::identity(&ModeId::new("m")),
                SearchBudget::default(),
            )
            .unwrap()
        {
            CellQueryResult::Found(_) => {}
            other => panic!("expected Found, got {other:?}"),
        }
    }
}
