//! End-to-end assembly of the construction and its certificate suite.

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::godel::words_of_length;
use crate::homology::{designated_relators, find_certificate, verify_certificate, BoundaryCertificate, FiniteOracle, OracleSpec};
use crate::presentation::{canonical_relator, hnn_extend, IntegerSet, Presentation};
use crate::smallcancel::{compute_pieces, DehnSolver, Encoder, JPrimeEncoder, SymmetrizedRelatorSet};
use crate::subgroup::{graph_rank, SubgroupGraph};
use crate::words::{Generator, GeneratorMap, Word};

use super::{
    a, approximate_normal_closure, b, build_gh, build_ks, build_ms, build_ys, c_exponent_sums, code_alphabet, codeword,
    compute_sn, d, embed_two_generator, fstar_endomorphisms, fstar_presentation, fstar_stable, gamma, ms_britton, rope_trick,
    u_shift_endomorphism, v_element, KsNormaliser, RopeTrick, SubgroupInput, NS_J, NS_QUOTIENT,
};

/// Stage names, in the order they are built and written.
pub const STAGES: [&str; 10] = ["input", "quotient", "GH", "jprime", "K", "M", "Fstar", "H", "rope_before", "rope"];

const HOMOLOGY_MAX_COSETS: usize = 10_000;

/// Every truncation the pipeline applies. Certificates hold under these
/// bounds and no others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineBounds {
    /// Longest spelling enumerated for `S(N)`.
    pub length_bound: usize,
    /// `S(N)` is cut down to `|s| ≤ s_bound`.
    pub s_bound: u64,
    /// `N` is approximated by conjugates `w r w⁻¹` with `|w|` at most this.
    pub conjugator_length: usize,
    pub l: usize,
    /// Longest `w` whose codewords are checked.
    pub codeword_length: usize,
    /// Range `|s| ≤ sample_bound` of the encoder and intersection samples.
    pub sample_bound: i64,
    /// Radius limit for the homology certificate on the input; 0 skips it.
    pub homology_radius: usize,
}

impl Default for PipelineBounds {
    fn default() -> Self {
        PipelineBounds {
            length_bound: 4,
            s_bound: 20,
            conjugator_length: 2,
            l: 13,
            codeword_length: 3,
            sample_bound: 20,
            homology_radius: 2,
        }
    }
}

impl PipelineBounds {
    /// All bounds zero: `S = {0}` throughout.
    pub fn zero(l: usize) -> Self {
        PipelineBounds {
            length_bound: 0,
            s_bound: 0,
            conjugator_length: 0,
            l,
            codeword_length: 0,
            sample_bound: 0,
            homology_radius: 0,
        }
    }
}

/// A checkable claim together with the data needed to re-check it from the
/// bundle files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `values` is `S(N)` cut to `|s| ≤ s_bound`, for `N` generated by
    /// `n_generators`, and indexes the `jprime` schema.
    GodelSet {
        length_bound: usize,
        s_bound: u64,
        n_generators: Vec<Word>,
        values: Vec<i64>,
    },
    /// The images of the input generators are freely independent and the
    /// quotient relators are the images of the input relators.
    Embedding { images: GeneratorMap, relators: Vec<Word> },
    /// `map(from) = to` after free reduction for every case. With a stage,
    /// every `stable⁻¹ x stable = map(x)` is also one of its relators.
    Substitution {
        name: String,
        stage: Option<String>,
        stable: Option<Generator>,
        map: GeneratorMap,
        cases: Vec<(Word, Word)>,
    },
    /// The words freely generate a subgroup of the given rank, equal to
    /// their number.
    FoldRank {
        name: String,
        generators: Vec<Word>,
        rank: usize,
    },
    /// Every `c_i` exponent sum of `map(x)` is divisible by 10, except for
    /// `x = d`, where each equals `gamma`.
    ModTen {
        stable: Generator,
        gamma: i64,
        l: usize,
        map: GeneratorMap,
    },
    /// Exact piece ratio of the stage's relators.
    PieceBound {
        stage: String,
        max_piece_length: usize,
        ratio: (u64, u64),
        c16: bool,
    },
    /// `j_1^s ⋯ j_l^s = 1` in the stage iff the recorded answer, which in
    /// turn must agree with membership in the schema's index set.
    EncoderDecision { stage: String, cases: Vec<(i64, bool)> },
    /// `t⁻¹ v_s t ∈ H` iff the recorded answer iff `s ∈ S`.
    Intersection { l: usize, cases: Vec<(i64, bool)> },
    /// The rope-trick elimination re-checks by back-substitution.
    Rope {
        stable: Generator,
        eliminated: Vec<(Generator, Word)>,
    },
    /// `target` bounds an integral 2-chain in the stage's Cayley complex.
    Homology {
        stage: String,
        designated: usize,
        oracle: OracleSpec,
        certificate: BoundaryCertificate,
    },
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Rejected(msg.into())
}

fn stage<'a>(stages: &'a IndexMap<String, Presentation>, name: &str) -> Result<&'a Presentation> {
    stages.get(name).ok_or_else(|| reject(format!("missing stage {name}")))
}

fn schema_set(p: &Presentation) -> Result<IntegerSet> {
    p.schemas()
        .first()
        .map(|s| s.index_set().clone())
        .ok_or_else(|| reject("encoder stage has no schema"))
}

fn check_map_relators(p: &Presentation, stable: &Generator, map: &GeneratorMap) -> Result<()> {
    let t = Word::letter(stable);
    for (x, y) in map.iter() {
        if !p.has_relator(&Word::letter(x).conjugate_by(&t).mul(&y.inverse())) {
            return Err(reject(format!("relator for {stable} on {x} is missing")));
        }
    }
    Ok(())
}

/// Decides `w = 1` in a `J'` stage, falling back to relator matching when
/// the stage is not C'(1/6).
fn encoder_decides(p: &Presentation, w: &Word) -> Result<bool> {
    let solver = DehnSolver::new(p)?;
    if solver.pieces_for(w.len()).is_c16() {
        return solver.is_identity(w);
    }
    let r = canonical_relator(w);
    if r.is_empty() || p.all_relators(None).contains(&r) {
        return Ok(true);
    }
    Err(Error::Refused(format!("{w} is not a relator instance and the stage is not C'(1/6)")))
}

impl Certificate {
    pub fn label(&self) -> String {
        match self {
            Certificate::GodelSet { .. } => "godel_set".into(),
            Certificate::Embedding { .. } => "embedding".into(),
            Certificate::Substitution { name, .. } => format!("substitution:{name}"),
            Certificate::FoldRank { name, .. } => format!("fold_rank:{name}"),
            Certificate::ModTen { stable, .. } => format!("mod_ten:{stable}"),
            Certificate::PieceBound { stage, .. } => format!("pieces:{stage}"),
            Certificate::EncoderDecision { stage, .. } => format!("encoder:{stage}"),
            Certificate::Intersection { .. } => "intersection".into(),
            Certificate::Rope { .. } => "rope".into(),
            Certificate::Homology { stage, .. } => format!("homology:{stage}"),
        }
    }

    pub fn verify(&self, stages: &IndexMap<String, Presentation>) -> Result<()> {
        match self {
            Certificate::GodelSet { length_bound, s_bound, n_generators, values } => {
                let n = SubgroupInput::Folded(SubgroupGraph::fold(n_generators));
                let got = compute_sn(&n, *length_bound)?.truncated(*s_bound);
                if got.values() != values.as_slice() {
                    return Err(reject(format!("S(N) is {:?}, certificate says {values:?}", got.values())));
                }
                if schema_set(stage(stages, "jprime")?)?.values() != values.as_slice() {
                    return Err(reject("jprime schema is not indexed by S(N)"));
                }
            }
            Certificate::Embedding { images, relators } => {
                let input = stage(stages, "input")?;
                if images.domain().ne(input.generators().iter()) {
                    return Err(reject("images do not cover the input generators"));
                }
                let words: Vec<Word> = images.iter().map(|(_, w)| w.clone()).collect();
                if graph_rank(&words) != words.len() {
                    return Err(reject("images are not freely independent"));
                }
                let keys: Vec<Word> = relators.iter().map(canonical_relator).collect();
                for r in input.all_relators(None) {
                    let image = canonical_relator(&images.substitute(&r)?);
                    if !image.is_empty() && !keys.contains(&image) {
                        return Err(reject(format!("image of {r} is missing")));
                    }
                }
                let quotient = stage(stages, "quotient")?;
                for r in relators {
                    let r = r.map_generators(|g| g.with_namespace(NS_QUOTIENT));
                    if !quotient.has_relator(&r) {
                        return Err(reject(format!("quotient lacks {r}")));
                    }
                }
            }
            Certificate::Substitution { name, stage: st, stable, map, cases } => {
                if let (Some(st), Some(stable)) = (st, stable) {
                    check_map_relators(stage(stages, st)?, stable, map)?;
                }
                for (from, to) in cases {
                    if map.substitute(from)?.reduce() != to.reduce() {
                        return Err(reject(format!("{name}: image of {from} is not {to}")));
                    }
                }
            }
            Certificate::FoldRank { name, generators, rank } => {
                let got = graph_rank(generators);
                if got != *rank || *rank != generators.len() {
                    return Err(reject(format!("{name}: rank {got}, expected {rank} of {}", generators.len())));
                }
            }
            Certificate::ModTen { stable, gamma, l, map } => {
                check_map_relators(stage(stages, "Fstar")?, stable, map)?;
                for (x, y) in map.iter() {
                    let sums = c_exponent_sums(y, *l);
                    let ok = if *x == d() {
                        sums.iter().all(|s| s == gamma)
                    } else {
                        sums.iter().all(|s| s % 10 == 0)
                    };
                    if !ok {
                        return Err(reject(format!("exponent sums of the image of {x} are {sums:?}")));
                    }
                }
            }
            Certificate::PieceBound { stage: st, max_piece_length, ratio, c16 } => {
                let report = compute_pieces(&SymmetrizedRelatorSet::from_presentation(stage(stages, st)?, None)?);
                let got = (*report.ratio.numer(), *report.ratio.denom());
                if report.max_piece_length != *max_piece_length || got != *ratio || report.is_c16() != *c16 {
                    return Err(reject(format!("pieces of {st}: measured {}/{}", got.0, got.1)));
                }
            }
            Certificate::EncoderDecision { stage: st, cases } => {
                let p = stage(stages, st)?;
                let set = schema_set(p)?;
                let marked: Vec<&Generator> = p.generators().iter().collect();
                for &(s, trivial) in cases {
                    let w = Word::from_runs(marked.iter().map(|g| (*g, s)));
                    if encoder_decides(p, &w)? != trivial || trivial != set.contains(s) {
                        return Err(reject(format!("encoder decision at s = {s}")));
                    }
                }
            }
            Certificate::Intersection { l, cases } => {
                let jp = stage(stages, "jprime")?;
                let set = schema_set(jp)?;
                let encoder = JPrimeEncoder::new(*l, set.clone(), NS_J)?;
                if encoder.presentation() != jp {
                    return Err(reject("jprime stage does not match J'(l, S)"));
                }
                let ks = build_ks(*l, encoder.presentation(), encoder.marked())?;
                let ms = build_ms(*l, &ks, encoder.marked())?;
                if &hnn_extend(&ms)? != stage(stages, "M")? {
                    return Err(reject("M stage does not match the HNN extension of K"));
                }
                let hnn = ms_britton(&ms)?;
                let norm = KsNormaliser::new(*l, &encoder);
                let t = Word::letter(hnn.stable());
                for &(s, in_h) in cases {
                    let r = hnn.britton_reduce(&v_element(*l, s)?.conjugate_by(&t));
                    if norm.in_h(&r)? != in_h || in_h != set.contains(s) {
                        return Err(reject(format!("intersection sample at s = {s}")));
                    }
                }
            }
            Certificate::Rope { stable, eliminated } => {
                let rt = RopeTrick {
                    before: stage(stages, "rope_before")?.clone(),
                    after: stage(stages, "rope")?.clone(),
                    stable: stable.clone(),
                    eliminated: eliminated.clone(),
                    h_relators: stage(stages, "H")?.relators().to_vec(),
                };
                if !rt.verify()? {
                    return Err(reject("rope-trick back-substitution fails"));
                }
            }
            Certificate::Homology { stage: st, designated, oracle, certificate } => {
                let p = stage(stages, st)?;
                let relators = designated_relators(p, *designated)?;
                let oracle = oracle.build(p.generators(), &relators)?;
                if !verify_certificate(p.generators(), &relators, oracle.as_ref(), certificate)? {
                    return Err(reject("boundary does not match the target loop"));
                }
            }
        }
        Ok(())
    }
}

/// Subgroup data written next to the stage presentations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupData {
    /// Generators of the folded approximation of `N ≤ ⟨F.a, F.b⟩`.
    pub n_generators: Vec<Word>,
    /// `S(N)` up to the length bound, before the `s_bound` cut.
    pub godel_set_untruncated: Vec<i64>,
    pub godel_set: Vec<i64>,
    pub v_s: Vec<Word>,
    pub y_s: Vec<Word>,
    /// Codewords `g_w` with `γ(w) ∈ S` and `w ∈ N`: a basis of `G ∩ Y_S`
    /// within the bounds.
    pub g_cap_ys: Vec<Word>,
}

/// Every stage, the subgroup data and the certificates of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineBundle {
    pub bounds: PipelineBounds,
    pub stages: IndexMap<String, Presentation>,
    pub subgroups: SubgroupData,
    pub certificates: Vec<Certificate>,
}

/// Union of two presentations, identifying generators with equal names.
fn glue(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    let mut out = p.clone();
    for g in q.generators() {
        if !out.generators().contains(g) {
            out.add_generator(g.clone())?;
        }
    }
    for r in q.relators() {
        out.add_relator(r)?;
    }
    for s in q.schemas() {
        out.add_schema(s.clone())?;
    }
    Ok(out)
}

fn in_stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Runs the construction on `p` under `bounds` and collects certificates.
pub fn run_pipeline(p: &Presentation, bounds: &PipelineBounds) -> Result<PipelineBundle> {
    let l = bounds.l;
    let mut stages = IndexMap::new();
    let mut certs = Vec::new();
    stages.insert("input".to_string(), p.clone());

    let emb = in_stage("quotient", embed_two_generator(p))?;
    stages.insert("quotient".into(), emb.quotient.clone());
    certs.push(Certificate::Embedding { images: emb.images.clone(), relators: emb.relators.clone() });

    let n_graph = approximate_normal_closure(&emb.relators, bounds.conjugator_length);
    let n_generators = n_graph.generators().to_vec();
    let untruncated = in_stage("godel", compute_sn(&SubgroupInput::Folded(n_graph.clone()), bounds.length_bound))?;
    let set = untruncated.truncated(bounds.s_bound);
    certs.push(Certificate::GodelSet {
        length_bound: bounds.length_bound,
        s_bound: bounds.s_bound,
        n_generators: n_generators.clone(),
        values: set.values().to_vec(),
    });

    let gh = in_stage("GH", build_gh(&Presentation::free([a(), b()]), &n_generators))?;
    stages.insert("GH".into(), gh);

    let encoder = in_stage("jprime", JPrimeEncoder::new(l, set.clone(), NS_J))?;
    stages.insert("jprime".into(), encoder.presentation().clone());
    let report = compute_pieces(&in_stage("jprime", SymmetrizedRelatorSet::from_presentation(encoder.presentation(), None))?);
    certs.push(Certificate::PieceBound {
        stage: "jprime".into(),
        max_piece_length: report.max_piece_length,
        ratio: (*report.ratio.numer(), *report.ratio.denom()),
        c16: report.is_c16(),
    });
    let mut decisions = Vec::new();
    for s in -bounds.sample_bound..=bounds.sample_bound {
        match encoder.is_identity(&encoder.diagonal(s)) {
            Ok(x) => decisions.push((s, x)),
            Err(Error::Refused(_)) if set.contains(s) && encoder.is_relator_instance(&encoder.diagonal(s)) => {
                decisions.push((s, true))
            }
            Err(Error::Refused(_)) => {}
            Err(e) => return Err(e.in_stage("jprime")),
        }
    }
    certs.push(Certificate::EncoderDecision { stage: "jprime".into(), cases: decisions });

    let ks = in_stage("K", build_ks(l, encoder.presentation(), encoder.marked()))?;
    stages.insert("K".into(), ks.clone());
    let ms = in_stage("M", build_ms(l, &ks, encoder.marked()))?;
    let m_pres = in_stage("M", hnn_extend(&ms))?;
    stages.insert("M".into(), m_pres.clone());
    if l >= 13 {
        let hnn = in_stage("M", ms_britton(&ms))?;
        let norm = KsNormaliser::new(l, &encoder);
        let t = Word::letter(hnn.stable());
        let mut cases = Vec::new();
        for s in -bounds.sample_bound..=bounds.sample_bound {
            let r = hnn.britton_reduce(&in_stage("M", v_element(l, s))?.conjugate_by(&t));
            cases.push((s, in_stage("M", norm.in_h(&r))?));
        }
        certs.push(Certificate::Intersection { l, cases });
    }

    let u_map = in_stage("M", u_shift_endomorphism(l))?;
    let mut shift_cases = Vec::new();
    for s in -bounds.sample_bound..=bounds.sample_bound {
        shift_cases.push((v_element(l, s)?, v_element(l, s + 1)?));
    }
    certs.push(Certificate::Substitution {
        name: "u_shift".into(),
        stage: None,
        stable: None,
        map: u_map,
        cases: shift_cases,
    });

    let fstar = in_stage("Fstar", fstar_presentation(l))?;
    let code_words: Vec<Word> = (0..=bounds.codeword_length)
        .flat_map(|n| words_of_length(n, &code_alphabet()))
        .collect();
    for (lambda, g, map) in in_stage("Fstar", fstar_endomorphisms(l))? {
        let u = fstar_stable(&lambda);
        let lw = Word::from_letters([lambda.clone()]);
        let cases = code_words
            .iter()
            .map(|w| Ok((codeword(w, l)?, codeword(&w.concat(&lw), l)?)))
            .collect::<Result<Vec<_>>>()?;
        certs.push(Certificate::Substitution {
            name: format!("codeword:{u}"),
            stage: Some("Fstar".into()),
            stable: Some(u.clone()),
            map: map.clone(),
            cases,
        });
        certs.push(Certificate::ModTen { stable: u, gamma: g, l, map });
    }
    stages.insert("Fstar".into(), fstar.clone());

    let v_s: Vec<Word> = set.values().iter().map(|&s| v_element(l, s)).collect::<Result<_>>()?;
    let y_s = build_ys(l, &set)?;
    let codewords: Vec<Word> = code_words.iter().map(|w| codeword(w, l)).collect::<Result<_>>()?;
    let mut g_cap_ys = Vec::new();
    for n in 0..=bounds.length_bound {
        for w in words_of_length(n, &code_alphabet()) {
            if set.contains(gamma(&w)?) && n_graph.contains(&w.reduce()) {
                g_cap_ys.push(codeword(&w, l)?);
            }
        }
    }
    for (name, gens) in [("V_S", &v_s), ("Y_S", &y_s), ("codewords", &codewords), ("G_cap_Y_S", &g_cap_ys)] {
        certs.push(Certificate::FoldRank { name: name.into(), generators: gens.clone(), rank: graph_rank(gens) });
    }

    let h_pres = in_stage("H", glue(&m_pres, &fstar))?;
    stages.insert("H".into(), h_pres.clone());
    let l_gens: Vec<(Word, Word)> = [a(), b()]
        .into_iter()
        .map(|g| (Word::letter(&g), Word::letter(&g.with_namespace(NS_QUOTIENT))))
        .collect();
    let rt = in_stage("rope", rope_trick(&h_pres, &emb.quotient, &l_gens))?;
    stages.insert("rope_before".into(), rt.before.clone());
    stages.insert("rope".into(), rt.after.clone());
    certs.push(Certificate::Rope { stable: rt.stable.clone(), eliminated: rt.eliminated.clone() });

    if bounds.homology_radius > 0 {
        if let Some(cert) = input_homology(p, bounds.homology_radius)? {
            certs.push(cert);
        }
    }

    Ok(PipelineBundle {
        bounds: bounds.clone(),
        stages,
        subgroups: SubgroupData {
            n_generators,
            godel_set_untruncated: untruncated.values().to_vec(),
            godel_set: set.values().to_vec(),
            v_s,
            y_s,
            g_cap_ys,
        },
        certificates: certs,
    })
}

/// A certificate that the square of the first relator of a finite input
/// bounds, when the input is small enough to enumerate.
fn input_homology(p: &Presentation, radius: usize) -> Result<Option<Certificate>> {
    let relators = p.all_relators(None);
    let Some(first) = relators.first() else { return Ok(None) };
    let oracle = match FiniteOracle::new(p.generators(), &relators, HOMOLOGY_MAX_COSETS) {
        Ok(o) => o,
        Err(Error::Inconclusive { .. }) => return Ok(None),
        Err(e) => return Err(e.in_stage("input")),
    };
    let target = first.concat(first);
    match find_certificate(p.generators(), &relators, &oracle, &target, radius) {
        Ok(certificate) => Ok(Some(Certificate::Homology {
            stage: "input".into(),
            designated: relators.len(),
            oracle: OracleSpec::Finite { max_cosets: HOMOLOGY_MAX_COSETS },
            certificate,
        })),
        Err(Error::Inconclusive { .. }) => Ok(None),
        Err(e) => Err(e.in_stage("input")),
    }
}

impl PipelineBundle {
    /// Re-checks every certificate against the stage presentations.
    pub fn verify(&self) -> Vec<(String, Result<()>)> {
        self.certificates
            .iter()
            .map(|c| (c.label(), c.verify(&self.stages)))
            .collect()
    }

    pub fn all_verified(&self) -> bool {
        self.verify().iter().all(|(_, r)| r.is_ok())
    }

    /// Writes one `<stage>.pres` per stage plus `bounds.json`,
    /// `subgroups.json` and `certificates.json`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, p) in &self.stages {
            fs::write(dir.join(format!("{name}.pres")), p.to_string())?;
        }
        fs::write(dir.join("bounds.json"), serde_json::to_string_pretty(&self.bounds)?)?;
        fs::write(dir.join("subgroups.json"), serde_json::to_string_pretty(&self.subgroups)?)?;
        fs::write(dir.join("certificates.json"), serde_json::to_string_pretty(&self.certificates)?)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let mut stages = IndexMap::new();
        for name in STAGES {
            let path = dir.join(format!("{name}.pres"));
            if path.exists() {
                let p: Presentation = fs::read_to_string(&path)?.parse().map_err(|e: Error| e.in_stage(name))?;
                stages.insert(name.to_string(), p);
            }
        }
        Ok(PipelineBundle {
            bounds: serde_json::from_str(&fs::read_to_string(dir.join("bounds.json"))?)?,
            stages,
            subgroups: serde_json::from_str(&fs::read_to_string(dir.join("subgroups.json"))?)?,
            certificates: serde_json::from_str(&fs::read_to_string(dir.join("certificates.json"))?)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PipelineBounds {
        PipelineBounds { length_bound: 2, s_bound: 20, sample_bound: 4, codeword_length: 2, ..Default::default() }
    }

    #[test]
    fn z2_pipeline() {
        let p: Presentation = "gens: x\nrel: x^2\n".parse().unwrap();
        let bundle = run_pipeline(&p, &small()).unwrap();
        assert_eq!(bundle.subgroups.godel_set, vec![0, 11, 13]);
        assert!(bundle.stages["jprime"].all_relators(None).len() == 2);
        for (label, r) in bundle.verify() {
            assert!(r.is_ok(), "{label}: {r:?}");
        }
        assert!(bundle.certificates.iter().any(|c| matches!(c, Certificate::Homology { .. })));
        let rope = &bundle.stages["rope"];
        assert!(rope.schemas().len() == 1);
        assert!(!rope.generators().iter().any(|g| g.namespace() == NS_QUOTIENT));
    }

    #[test]
    fn zero_bounds_are_degenerate() {
        let p: Presentation = "gens: x\nrel: x^2\n".parse().unwrap();
        let bundle = run_pipeline(&p, &PipelineBounds::zero(13)).unwrap();
        assert_eq!(bundle.subgroups.godel_set, vec![0]);
        assert!(bundle.stages["jprime"].all_relators(None).is_empty());
        assert!(bundle.all_verified());
    }

    #[test]
    fn bundle_round_trip_and_tamper() {
        let p: Presentation = "gens: x\nrel: x^2\n".parse().unwrap();
        let bundle = run_pipeline(&p, &small()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        bundle.save(dir.path()).unwrap();
        let loaded = PipelineBundle::load(dir.path()).unwrap();
        assert_eq!(loaded, bundle);
        assert!(loaded.all_verified());

        let mut bad = loaded.clone();
        for c in &mut bad.certificates {
            if let Certificate::GodelSet { values, .. } = c {
                values.push(12);
            }
        }
        assert!(!bad.all_verified());
    }

    #[test]
    fn small_l_skips_the_intersection() {
        let p: Presentation = "gens: x\n".parse().unwrap();
        let bounds = PipelineBounds { l: 4, ..small() };
        let bundle = run_pipeline(&p, &bounds).unwrap();
        assert!(!bundle.certificates.iter().any(|c| matches!(c, Certificate::Intersection { .. })));
        assert!(bundle.all_verified());
    }
}
