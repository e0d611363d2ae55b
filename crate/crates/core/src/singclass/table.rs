use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use algebra::{Field, Polynomial};

use super::local::{std_ring, tjurina, weierstrass};
use super::{blowup_signature, format_multiset, SingClass};

const SOURCE: &str = include_str!("../../assets/normal_forms.txt");
const BUILD_ORDER: i64 = 40;

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub class: SingClass,
    pub equation: Polynomial,
    pub tau: usize,
    /// Sorted singularities on the blow-up of the origin.
    pub children: Vec<SingClass>,
}

/// Types `D` and `E` keyed by blow-up data and Tjurina number.
#[derive(Debug, Default)]
pub struct NormalFormTable {
    forms: Vec<NormalForm>,
    by_key: HashMap<(Vec<SingClass>, usize), usize>,
}

impl NormalFormTable {
    pub fn forms(&self) -> &[NormalForm] {
        &self.forms
    }

    pub fn get(&self, class: &SingClass) -> Option<&NormalForm> {
        self.forms.iter().find(|f| &f.class == class)
    }

    pub fn lookup(&self, children: &[SingClass], tau: usize) -> SingClass {
        match self.by_key.get(&(children.to_vec(), tau)) {
            Some(&i) => self.forms[i].class.clone(),
            None => SingClass::Unclassified(format!(
                "no normal form with blow-up {} and tau {tau}",
                format_multiset(children)
            )),
        }
    }

    fn insert(&mut self, form: NormalForm) {
        let key = (form.children.clone(), form.tau);
        if let Some(&i) = self.by_key.get(&key) {
            panic!("{} and {} share blow-up data and tau", self.forms[i].class, form.class);
        }
        self.by_key.insert(key, self.forms.len());
        self.forms.push(form);
    }

    /// Build from `TYPE : equation` lines, resolving forms in order of
    /// increasing Tjurina number.
    pub fn from_source(text: &str) -> Result<NormalFormTable, String> {
        let ring = std_ring(&Field::gf2());
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (c, eq) = line.split_once(':').ok_or(format!("line {}: expected `TYPE : equation`", i + 1))?;
            let class: SingClass = c.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
            let p = ring.parse(eq.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
            let tau = tjurina(&p, BUILD_ORDER).ok_or(format!("line {}: tau not found", i + 1))?;
            raw.push((class, p, tau));
        }
        raw.sort_by_key(|r| r.2);
        let mut table = NormalFormTable::default();
        let mut dynkin_tau: BTreeMap<(String, usize), SingClass> = BTreeMap::new();
        for (class, p, tau) in raw {
            let w = weierstrass(&p, BUILD_ORDER);
            let (children, t) = match blowup_signature(&w, BUILD_ORDER, 0, &table) {
                Ok(Ok(sig)) => sig,
                Ok(Err(why)) => return Err(format!("{class}: {why}")),
                Err(_) => return Err(format!("{class}: jet order too small")),
            };
            debug_assert_eq!(t, tau);
            if let Some(other) = dynkin_tau.insert((class.dynkin(), tau), class.clone()) {
                return Err(format!("{other} and {class} share Dynkin type and tau"));
            }
            table.insert(NormalForm { class, equation: p, tau, children });
        }
        Ok(table)
    }
}

pub fn normal_form_table() -> &'static NormalFormTable {
    static TABLE: OnceLock<NormalFormTable> = OnceLock::new();
    TABLE.get_or_init(|| NormalFormTable::from_source(SOURCE).expect("shipped normal forms are consistent"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_covers_shipped_types() {
        let t = normal_form_table();
        assert_eq!(t.forms().len(), 51);
        assert_eq!(t.get(&SingClass::E(8, 0)).unwrap().tau, 16);
        for f in t.forms() {
            println!("{:6} tau {:3} blow-up {}", f.class.to_string(), f.tau, format_multiset(&f.children));
        }
    }
}
