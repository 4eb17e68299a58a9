#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use fusionkit::constructions::{
    group_ring, semidirect_product, FiniteGroupPresentation, RingAutomorphismAction, SemidirectConstruction,
};
use fusionkit::{BasedModule, BasedRing, BasisId, EmbeddingMap, NNElement, SubringEmbedding};

pub fn b(s: &str) -> BasisId {
    BasisId::new(s)
}

pub fn cyclic(n: usize, g: &str) -> BasedRing {
    group_ring(&FiniteGroupPresentation::cyclic(n, g).unwrap()).unwrap()
}

pub fn s3() -> BasedRing {
    group_ring(&FiniteGroupPresentation::symmetric3()).unwrap()
}

/// Z[Z/2] = {e, g} ⊂ Z[Z/4] = {e, a, a2, a3} via g ↦ a2.
pub fn z2_in_z4() -> SubringEmbedding {
    let map = BTreeMap::from([(b("e"), b("e")), (b("g"), b("a2"))]);
    SubringEmbedding::new(cyclic(2, "g"), cyclic(4, "a"), EmbeddingMap::Table(map))
}

/// Z[Z/3] = {e, r, r2} ⊂ Z[S3] by label.
pub fn z3_in_s3() -> SubringEmbedding {
    SubringEmbedding::new(cyclic(3, "r"), s3(), EmbeddingMap::Identity)
}

/// Z/2 = {e, g} acting on Z[Z/3] = {e, a, a2} by inversion.
pub fn inversion_product() -> SemidirectConstruction {
    let z2 = FiniteGroupPresentation::cyclic(2, "g").unwrap();
    let z3 = cyclic(3, "a");
    let perms = BTreeMap::from([(b("g"), BTreeMap::from([(b("a"), b("a2")), (b("a2"), b("a"))]))]);
    let act = RingAutomorphismAction::new(&z2, &z3, perms).unwrap();
    semidirect_product(&z2, &z3, &act).unwrap()
}

/// The rank-1 module with every basis element acting as the identity.
pub fn rank_one(ring: &BasedRing) -> BasedModule {
    let action: HashMap<_, _> =
        ring.finite_basis().unwrap()[1..].iter().map(|a| ((a.clone(), b("j")), NNElement::basis(b("j")))).collect();
    BasedModule::explicit(ring, vec![b("j")], action, None).unwrap()
}

/// Definition files used by the command-line tests.
pub struct Workspace {
    pub dir: tempfile::TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        let ws = Workspace { dir: tempfile::tempdir().unwrap() };
        let group =
            |n: usize, g: &str| format!(r#"{{"construct":"group_ring","group":{{"cyclic":{n},"generator":"{g}"}}}}"#);
        let construct = |expr: String| format!(r#"{{"kind":"construct","expr":{expr}}}"#);
        ws.write("su2.json", r#"{"construct":"su2"}"#);
        ws.write(
            "so3-embed.json",
            r#"{"kind":"embedding","sub":{"construct":"so3"},"ambient":"su2.json","map":"identity"}"#,
        );
        ws.write("z2.json", &construct(group(2, "g")));
        ws.write("z3.json", &construct(group(3, "a")));
        ws.write("z4.json", &construct(group(4, "a")));
        ws.write("s3.json", r#"{"kind":"construct","expr":{"construct":"group_ring","group":{"named":"S3"}}}"#);
        ws.write(
            "z2-in-z4.json",
            r#"{"kind":"embedding","sub":"z2.json","ambient":"z4.json","map":{"table":{"e":"e","g":"a2"}}}"#,
        );
        ws.write(
            "z3-in-s3.json",
            &format!(r#"{{"kind":"embedding","sub":{},"ambient":"s3.json","map":"identity"}}"#, group(3, "r")),
        );
        ws.write("std-z2.json", r#"{"kind":"module","ring":"z2.json","standard":true}"#);
        ws.write("std-z4.json", r#"{"kind":"module","ring":"z4.json","standard":true}"#);
        ws.write("std-s3.json", r#"{"kind":"module","ring":"s3.json","standard":true}"#);
        ws.write("rank1-z2.json", r#"{"kind":"module","ring":"z2.json","basis":["j"],"action":[["g","j",{"j":1}]]}"#);
        ws.write(
            "rank1-z3.json",
            &format!(
                r#"{{"kind":"module","ring":{},"basis":["j"],"action":[["r","j",{{"j":1}}],["r2","j",{{"j":1}}]]}}"#,
                group(3, "r")
            ),
        );
        ws.write(
            "dihedral.json",
            &construct(format!(r#"{{"construct":"free_product","left":{},"right":{}}}"#, group(2, "s"), group(2, "t"))),
        );
        ws.write(
            "free23.json",
            &construct(format!(r#"{{"construct":"free_product","left":{},"right":{}}}"#, group(2, "g"), group(3, "h"))),
        );
        ws.write(
            "free23-left.json",
            &format!(r#"{{"kind":"embedding","sub":{},"ambient":"free23.json","map":"left_factor"}}"#, group(2, "g")),
        );
        ws.write(
            "free23-right.json",
            &format!(r#"{{"kind":"embedding","sub":{},"ambient":"free23.json","map":"right_factor"}}"#, group(3, "h")),
        );
        let rs3 = r#"{"construct":"rep_ring","table":"S3"}"#;
        ws.write("rs3.json", &construct(rs3.to_string()));
        let semi = format!(
            r#"{{"construct":"semidirect_product","group":{{"cyclic":2,"generator":"g"}},"target":{},"action":{{"g":{{"a":"a2","a2":"a"}}}}}}"#,
            group(3, "a")
        );
        ws.write("semi.json", &construct(semi));
        ws.write(
            "semi-group.json",
            &format!(r#"{{"kind":"embedding","sub":{},"ambient":"semi.json","map":"acting_group"}}"#, group(2, "g")),
        );
        ws.write(
            "semi-target.json",
            &format!(r#"{{"kind":"embedding","sub":{},"ambient":"semi.json","map":"target"}}"#, group(3, "a")),
        );
        ws.write("std-z3.json", r#"{"kind":"module","ring":"z3.json","standard":true}"#);
        ws.write("std-z2-semi.json", r#"{"kind":"module","ring":"z2.json","standard":true}"#);
        ws.write("bad-module.json", r#"{"kind":"module","ring":"z2.json","basis":["j"],"action":[["g","j",{"j":2}]]}"#);
        ws
    }

    pub fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    pub fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }

    pub fn root(&self) -> &Path {
        self.dir.path()
    }
}
