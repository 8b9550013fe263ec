use std::path::Path;

use egmc::codec::{pack, packed_len, unpack};
use egmc::matrixcode::{left_stabilizer, right_stabilizer};
use egmc::pke::{
    self, peek_params, rng_from_seed, secret_key_from_bytes, secret_key_to_bytes, KeyKind, MAGIC,
};
use egmc::security::{self, registry};
use egmc::{BaseField, Ciphertext, EgmcParams, McEliecePublicKey, MatrixCodeBasis, NiederreiterPublicKey};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{read, write, CliError, Result};
use crate::{ParamArgs, SchemeArg};

/// Largest ambient dimension rows·cols accepted by `distinguish`.
pub const DISTINGUISH_GUARD: usize = 1 << 14;

enum PublicKey {
    McEliece(McEliecePublicKey),
    Niederreiter(NiederreiterPublicKey),
}

impl PublicKey {
    fn load(path: &Path) -> Result<Self> {
        let bytes = read(path)?;
        match peek_params(&bytes)?.0 {
            KeyKind::McEliecePublic => Ok(PublicKey::McEliece(McEliecePublicKey::from_bytes(&bytes)?)),
            KeyKind::NiederreiterPublic => Ok(PublicKey::Niederreiter(NiederreiterPublicKey::from_bytes(&bytes)?)),
            KeyKind::Secret => Err(CliError::Usage(format!("{} is a secret key", path.display()))),
        }
    }

    fn params(&self) -> EgmcParams {
        match self {
            PublicKey::McEliece(pk) => pk.params,
            PublicKey::Niederreiter(pk) => pk.params,
        }
    }
}

fn set_names() -> String {
    registry().iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
}

fn resolve(args: &ParamArgs) -> Result<(Option<&'static str>, EgmcParams)> {
    if let Some(name) = &args.set {
        let set = security::find_set(name)
            .map_err(|_| CliError::Usage(format!("unknown parameter set `{name}`; known sets: {}", set_names())))?;
        return Ok((Some(set.name), set.params));
    }
    match (args.q, args.m, args.k, args.l1, args.l2, args.r) {
        (Some(q), Some(m), Some(k), Some(l1), Some(l2), Some(r)) => Ok((None, EgmcParams::new(q, m, k, l1, l2, r)?)),
        _ => Err(CliError::Usage(
            "give --set NAME or all of --q --m --k --l1 --l2 --r".into(),
        )),
    }
}

fn parse_seed(seed: Option<&str>) -> Result<[u8; 32]> {
    let Some(s) = seed else {
        return Ok(rand::random());
    };
    let bytes = hex::decode(s.trim()).map_err(|e| CliError::Usage(format!("--seed: {e}")))?;
    if bytes.is_empty() || bytes.len() > 32 {
        return Err(CliError::Usage("--seed takes 1 to 32 bytes of hex".into()));
    }
    let mut out = [0u8; 32];
    out[..bytes.len()].copy_from_slice(&bytes);
    Ok(out)
}

fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn describe(p: &EgmcParams) -> String {
    format!("q={} m={} k={} l1={} l2={} r={}", p.q, p.m, p.k, p.l1, p.l2, p.r)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

pub fn keygen(args: &ParamArgs, scheme: SchemeArg, seed: Option<&str>, out_dir: &Path, name: &str) -> Result<()> {
    let (set, params) = resolve(args)?;
    params.validate()?;
    let seed = parse_seed(seed)?;
    let kp = pke::keygen(&params, seed)?;
    let (pk_bytes, payload) = match scheme {
        SchemeArg::Mceliece => (kp.pk_mce.to_bytes()?, None),
        SchemeArg::Niederreiter => (kp.pk_nied.to_bytes()?, Some(kp.pk_nied.payload_len())),
    };
    let sk_bytes = secret_key_to_bytes(&kp.sk)?;
    create_dir(out_dir)?;
    let pk_path = out_dir.join(format!("{name}.pk"));
    let sk_path = out_dir.join(format!("{name}.sk"));
    write(&pk_path, &pk_bytes)?;
    write(&sk_path, &sk_bytes)?;

    println!("parameters  {} {}", set.unwrap_or("custom"), describe(&params));
    println!("scheme      {scheme:?}");
    match payload {
        Some(p) => println!("public key  {}  {} bytes (payload {p})", pk_path.display(), pk_bytes.len()),
        None => println!("public key  {}  {} bytes", pk_path.display(), pk_bytes.len()),
    }
    println!("  sha256    {}", checksum(&pk_bytes));
    println!("secret key  {}  {} bytes", sk_path.display(), sk_bytes.len());
    println!("  sha256    {}", checksum(&sk_bytes));
    Ok(())
}

pub fn encrypt(
    pk_path: &Path,
    message: Option<&str>,
    seed: Option<&str>,
    out: &Path,
    plaintext_out: Option<&Path>,
) -> Result<()> {
    let pk = PublicKey::load(pk_path)?;
    let params = pk.params();
    let field = params.base_field()?;
    let mut rng = rng_from_seed(parse_seed(seed)?);
    let ct = match &pk {
        PublicKey::McEliece(pk) => {
            let msg = message.ok_or_else(|| CliError::Usage("McEliece encryption needs --message".into()))?;
            let mu = parse_message(&field, msg, params.big_k())?;
            pke::mce_encrypt(pk, &mu, &mut rng)?
        }
        PublicKey::Niederreiter(pk) => {
            if message.is_some() {
                return Err(CliError::Usage(
                    "Niederreiter encryption samples its plaintext; use --plaintext-out".into(),
                ));
            }
            let (mu, ct) = pke::nied_encrypt_random(pk, &mut rng)?;
            if let Some(path) = plaintext_out {
                write(path, format!("{}\n", hex::encode(pack(&field, &mu))).as_bytes())?;
            }
            ct
        }
    };
    let bytes = ct.to_bytes(&field);
    write(out, &bytes)?;
    println!(
        "ciphertext  {}  {} bytes (payload {})",
        out.display(),
        bytes.len(),
        ct.payload(&field).len()
    );
    Ok(())
}

fn parse_message(field: &BaseField, msg: &str, count: usize) -> Result<Vec<u16>> {
    let bytes = hex::decode(msg.trim()).map_err(|e| CliError::Usage(format!("--message: {e}")))?;
    let need = packed_len(field, count);
    if bytes.len() != need {
        return Err(CliError::Usage(format!(
            "--message must be {need} bytes ({count} elements of F_{}), got {}",
            field.q(),
            bytes.len()
        )));
    }
    Ok(unpack(field, &bytes, count)?)
}

pub fn decrypt(sk_path: &Path, pk_path: &Path, ct_path: &Path, out: Option<&Path>) -> Result<()> {
    let sk = secret_key_from_bytes(&read(sk_path)?)?;
    let pk = PublicKey::load(pk_path)?;
    let params = pk.params();
    let field = params.base_field()?;
    let ct = Ciphertext::from_bytes(&params, &read(ct_path)?)?;
    let mu = match &pk {
        PublicKey::McEliece(pk) => pke::mce_decrypt(&sk, pk, &ct)?,
        PublicKey::Niederreiter(pk) => pke::nied_decrypt(&sk, pk, &ct)?,
    };
    let text = format!("{}\n", hex::encode(pack(&field, &mu)));
    match out {
        Some(path) => write(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn params(set: Option<&str>, csv: bool, json: bool) -> Result<()> {
    let rows = match set {
        Some(name) => {
            let set = security::find_set(name)
                .map_err(|_| CliError::Usage(format!("unknown parameter set `{name}`; known sets: {}", set_names())))?;
            vec![security::recompute(set)?]
        }
        None => security::recompute_all()?,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
    } else if csv {
        print!("{}", security::table_csv(&rows));
    } else {
        print!("{}", security::table_text(&rows));
    }
    Ok(())
}

pub fn estimate(args: &ParamArgs, as_json: bool) -> Result<()> {
    let (name, p) = resolve(args)?;
    let report = security::estimate(&p)?;
    let mrd = security::mrd_quantities(&p);
    let dual = security::dual_attack_threshold(&p);
    let mut warnings = Vec::new();
    if p.l1 == 0 && p.l2 == 0 {
        warnings.push("l1 = l2 = 0: the code is an expanded Gabidulin code; polynomial-time distinguisher applies");
    }
    if p.validate().is_err() {
        warnings.push("r exceeds the decoding radius; keys cannot be generated for these parameters");
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if as_json {
        let value = json!({
            "name": name,
            "params": p,
            "report": report,
            "mrd": mrd,
            "dual_attack_threshold": dual,
            "pk_bytes": security::pk_payload_bytes(&p),
            "ct_bytes": security::ct_payload_bytes(&p),
            "warnings": warnings,
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
        return Ok(());
    }
    println!("parameters  {} {}", name.unwrap_or("custom"), describe(&p));
    println!("Struc.      {:.0}", report.structural_bits);
    println!("Comb.       {:.0}", report.kernel_bits);
    println!(
        "Alg.        {:.1}  (b={}, columns={})",
        report.support_minors_bits, report.b_opt, report.sm_cols
    );
    println!(
        "Hyb.        {:.1}  (a={}, b={}, columns={})",
        report.hybrid_bits, report.a_opt, report.hybrid_b, report.hybrid_cols
    );
    println!("pk bytes    {}", security::pk_payload_bytes(&p));
    println!("ct bytes    {}", security::ct_payload_bytes(&p));
    println!(
        "d0          {}{}  (log2 #codewords >= {:.1})",
        mrd.d0,
        if mrd.adapted { " (adapted)" } else { "" },
        mrd.log2_n_lower
    );
    match dual {
        Some(b) => println!("dual attack applies for b <= {b}"),
        None => println!("dual attack inapplicable"),
    }
    Ok(())
}

pub fn distinguish(path: &Path, q: Option<u32>) -> Result<()> {
    let bytes = read(path)?;
    let code = if bytes.starts_with(MAGIC) {
        match PublicKey::load(path)? {
            PublicKey::McEliece(pk) => pk.code,
            PublicKey::Niederreiter(pk) => pk.to_code()?,
        }
    } else {
        let q = q.ok_or_else(|| CliError::Usage("raw code files need --q".into()))?;
        MatrixCodeBasis::from_bytes(&BaseField::new(q)?, &bytes)?
    };
    let dim = code.rows() * code.cols();
    if dim > DISTINGUISH_GUARD {
        return Err(CliError::SizeGuard { dim });
    }
    let left = left_stabilizer(&code).dim;
    let right = right_stabilizer(&code).dim;
    let verdict = if left > 1 || right > 1 {
        "fqm-linear-structure"
    } else {
        "random-like"
    };
    println!("code        {}x{} over F_{}, dimension {}", code.rows(), code.cols(), code.field().q(), code.dim());
    println!("left stabilizer dim   {left}");
    println!("right stabilizer dim  {right}");
    println!("verdict     {verdict}");
    Ok(())
}
