//! JSON file formats for spaces, groups, representations, actions and
//! cochains, plus the shorthand names accepted on the command line.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::cohomology::{Cochain, CochainFile};
use crate::complexes::{DeltaSet, SimplicialComplex};
use crate::exact::IntMatrix;
use crate::groups::{
    antipodal_representation, elementary_abelian, sign_representation, FiniteGroup, GroupAction, Representation,
};

/// `{"vertices": 7, "facets": [[0, 1, 3], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

/// `{"counts": [...], "faces": {"1": [[d0, d1], ...], ...}}` with optional
/// group action and projection attached.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaFile {
    pub counts: Vec<usize>,
    pub faces: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

/// `{"dim": n, "matrices": {"0": [[...]], "1": [[...]], ...}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepFile {
    pub group: Option<GroupFile>,
    pub dim: usize,
    pub matrices: BTreeMap<String, IntMatrix>,
}

/// `perms[g][k][s]` is the image of the `k`-simplex `s` under `g`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionFile {
    pub group: GroupFile,
    pub perms: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceFile {
    Complex(ComplexFile),
    Delta(DeltaFile),
}

impl From<&FiniteGroup> for GroupFile {
    fn from(g: &FiniteGroup) -> Self {
        Self { order: g.order(), table: g.table() }
    }
}

impl GroupFile {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            bail!("group table has {} rows but order {}", self.table.len(), self.order);
        }
        Ok(FiniteGroup::from_table(&self.table)?)
    }
}

impl From<&GroupAction> for ActionFile {
    fn from(a: &GroupAction) -> Self {
        Self { group: a.group().into(), perms: a.perms().to_vec() }
    }
}

impl ActionFile {
    pub fn to_action(&self, ds: &DeltaSet) -> Result<GroupAction> {
        Ok(GroupAction::new(self.group.to_group()?, ds, self.perms.clone())?)
    }
}

impl DeltaFile {
    pub fn from_delta(ds: &DeltaSet) -> Self {
        let faces = ds.face_tables().into_iter().enumerate().skip(1).map(|(k, t)| (k.to_string(), t)).collect();
        Self { counts: ds.counts().to_vec(), faces, action: None, projection: None }
    }

    pub fn to_delta(&self) -> Result<DeltaSet> {
        let mut tables = vec![Vec::new()];
        for k in 1..self.counts.len() {
            let t = self.faces.get(&k.to_string()).with_context(|| format!("missing face table for dimension {k}"))?;
            tables.push(t.clone());
        }
        if let Some(extra) = self.faces.keys().find(|key| key.parse::<usize>().map_or(true, |k| k == 0 || k >= self.counts.len())) {
            bail!("unexpected face table key {extra:?}");
        }
        Ok(DeltaSet::new(self.counts.clone(), tables)?)
    }
}

impl From<&SimplicialComplex> for ComplexFile {
    fn from(sc: &SimplicialComplex) -> Self {
        Self { vertices: sc.vertex_count(), facets: sc.facets() }
    }
}

/// A space read from disk, with whatever action travelled with it.
pub struct LoadedSpace {
    pub delta: DeltaSet,
    pub action: Option<GroupAction>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("cannot write {}", p.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

pub fn load_space(path: &Path) -> Result<LoadedSpace> {
    match read_json::<SpaceFile>(path)? {
        SpaceFile::Complex(c) => {
            let sc = SimplicialComplex::from_facets(c.vertices, &c.facets)?;
            Ok(LoadedSpace { delta: sc.to_delta()?, action: None })
        }
        SpaceFile::Delta(d) => {
            let delta = d.to_delta()?;
            let action = d.action.as_ref().map(|a| a.to_action(&delta)).transpose()?;
            Ok(LoadedSpace { delta, action })
        }
    }
}

pub fn load_cochain(path: &Path) -> Result<Cochain> {
    let f: CochainFile = read_json(path)?;
    if let Some(bad) = f.values.iter().find(|&&v| v > 1) {
        bail!("cochain values must be 0 or 1, found {bad}");
    }
    Ok(Cochain::from(&f))
}

/// `z2^k`, `z<m>`, or a path to a group file.
pub fn parse_group(name: &str) -> Result<FiniteGroup> {
    if let Some(k) = name.strip_prefix("z2^") {
        let k: usize = k.parse().with_context(|| format!("bad exponent in {name:?}"))?;
        if k == 0 || k > 16 {
            bail!("z2^k needs 1 <= k <= 16");
        }
        return Ok(elementary_abelian(k));
    }
    if let Some(m) = name.strip_prefix('z').and_then(|m| m.parse::<usize>().ok()) {
        if m == 0 {
            bail!("z0 is not a group");
        }
        return Ok(FiniteGroup::cyclic(m));
    }
    read_json::<GroupFile>(Path::new(name))?.to_group()
}

/// `sign` (coordinate sign flips of `z2^k`), `neg:<d>` (`-I_d` for `z2`), or
/// a path to a representation file over `group`.
pub fn parse_rep(name: &str, group: &FiniteGroup) -> Result<Representation> {
    if name == "sign" {
        if !group.is_elementary_abelian() {
            bail!("the sign representation needs an elementary abelian 2-group");
        }
        let k = group.order().trailing_zeros() as usize;
        let rep = sign_representation(k);
        if rep.group() != group {
            bail!("group table does not match the standard z2^{k} labelling");
        }
        return Ok(rep);
    }
    if let Some(d) = name.strip_prefix("neg:") {
        let d: usize = d.parse().with_context(|| format!("bad dimension in {name:?}"))?;
        if d == 0 {
            bail!("neg:<d> needs d >= 1");
        }
        let rep = antipodal_representation(d);
        if rep.group() != group {
            bail!("neg:<d> is a representation of z2");
        }
        return Ok(rep);
    }
    let f: RepFile = read_json(Path::new(name))?;
    let g = match &f.group {
        Some(gf) => gf.to_group()?,
        None => group.clone(),
    };
    if &g != group {
        bail!("representation file is over a different group");
    }
    let matrices = g
        .elements()
        .map(|x| f.matrices.get(&x.to_string()).cloned().with_context(|| format!("missing matrix for element {x}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Representation::new(g, f.dim, matrices)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ggspaces::{antipodal_action, crosspolytope_boundary, rp_deltaset};

    #[test]
    fn delta_round_trip() {
        let rp = rp_deltaset(3);
        let f = DeltaFile::from_delta(&rp);
        let text = serde_json::to_string(&f).unwrap();
        let back: SpaceFile = serde_json::from_str(&text).unwrap();
        match back {
            SpaceFile::Delta(d) => assert_eq!(d.to_delta().unwrap(), rp),
            SpaceFile::Complex(_) => panic!("delta file parsed as a complex"),
        }
    }

    #[test]
    fn action_round_trip() {
        let ds = crosspolytope_boundary(3).to_delta().unwrap();
        let act = antipodal_action(3);
        let f = ActionFile::from(&act);
        assert_eq!(f.to_action(&ds).unwrap(), act);
    }

    #[test]
    fn shorthands() {
        assert_eq!(parse_group("z2^2").unwrap().order(), 4);
        assert_eq!(parse_group("z3").unwrap(), FiniteGroup::cyclic(3));
        assert!(parse_group("z0").is_err());
        let g = parse_group("z2^1").unwrap();
        assert_eq!(parse_rep("neg:3", &g).unwrap().dim(), 3);
        assert_eq!(parse_rep("sign", &g).unwrap().dim(), 1);
        assert!(parse_rep("sign", &FiniteGroup::cyclic(3)).is_err());
    }

    #[test]
    fn malformed_delta_file() {
        let f: DeltaFile = serde_json::from_str(r#"{"counts": [2, 1], "faces": {}}"#).unwrap();
        assert!(f.to_delta().is_err());
        let f: DeltaFile = serde_json::from_str(r#"{"counts": [2, 1], "faces": {"1": [[0, 1]], "x": []}}"#).unwrap();
        assert!(f.to_delta().is_err());
    }
}
