use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::sync::Arc;
use std::thread;

use hsslab_core::pir::{Direction, EncodedDb, Pir, PirMessage, PirParams, HEADER_LEN};
use hsslab_core::Fe;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::seed;
use crate::config::{need, Params};
use crate::error::{CliError, CliResult};
use crate::report::{bits, ratio, Outcome, SCHEMA_VERSION};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DbParams {
    pub d: usize,
    pub t: usize,
    pub k: usize,
    pub w: usize,
    pub n: usize,
}

/// On-disk database: parameters plus one bit string per record.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DbFile {
    pub schema_version: u32,
    pub params: DbParams,
    pub records: Vec<String>,
}

impl DbFile {
    pub fn load(path: &Path) -> CliResult<DbFile> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn record_bits(&self) -> CliResult<Vec<Vec<u8>>> {
        self.records
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(CliError::invalid("records must be strings of 0 and 1")),
                    })
                    .collect()
            })
            .collect()
    }
}

fn params_from(p: &Params) -> CliResult<DbParams> {
    Ok(DbParams { d: p.d.unwrap_or(2), t: p.t.unwrap_or(1), k: p.k.unwrap_or(5), w: p.w.unwrap_or(1), n: need(p.n, "n")? })
}

pub fn protocol(dp: &DbParams) -> CliResult<Pir> {
    Ok(Pir::new(PirParams::new(dp.d, dp.t, dp.k, dp.w, dp.n)?)?)
}

/// A loaded database ready to answer queries.
pub struct Served {
    pub pir: Pir,
    pub db: EncodedDb,
    pub records: Vec<Vec<u8>>,
}

pub fn load_served(path: &Path) -> CliResult<Served> {
    let file = DbFile::load(path)?;
    let pir = protocol(&file.params)?;
    let records = file.record_bits()?;
    let db = pir.encode_db(&records)?;
    Ok(Served { pir, db, records })
}

pub fn gen_db(p: &Params) -> CliResult<Outcome> {
    let dp = params_from(p)?;
    let pir = protocol(&dp)?;
    let path = p.db.as_ref().ok_or_else(|| CliError::invalid("missing --db"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed(p));
    let len = pir.params.record_bits();
    let records: Vec<String> = (0..dp.n).map(|_| (0..len).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect()).collect();
    let file = DbFile { schema_version: SCHEMA_VERSION, params: dp, records };
    std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    Ok(Outcome::json(json!({
        "db": path.display().to_string(),
        "records": file.params.n,
        "record_bits": len,
        "variables": pir.params.m,
        "symbol_bits": pir.params.sym_bits,
    })))
}

/// Reads one frame; `None` on a clean end of stream.
pub fn read_frame(stream: &mut impl Read) -> CliResult<Option<PirMessage>> {
    let mut header = [0u8; HEADER_LEN];
    let mut got = 0;
    while got < HEADER_LEN {
        let n = stream.read(&mut header[got..])?;
        if n == 0 {
            return if got == 0 { Ok(None) } else { Err(CliError::invalid("truncated frame header")) };
        }
        got += n;
    }
    let len = PirMessage::payload_len(&header)?;
    let mut frame = header.to_vec();
    frame.resize(HEADER_LEN + len, 0);
    stream.read_exact(&mut frame[HEADER_LEN..])?;
    Ok(Some(PirMessage::decode(&frame)?))
}

fn handle(mut stream: TcpStream, s: &Served) -> CliResult<usize> {
    let mut frames = 0;
    while let Some(msg) = read_frame(&mut stream)? {
        let v = msg.server as usize;
        if msg.direction != Direction::Query || v >= s.pir.params.k {
            return Err(CliError::invalid(format!("unexpected frame for server {v}")));
        }
        let q = s.pir.parse_query(&msg)?;
        let a = s.pir.answer(&q, &s.db, v)?;
        stream.write_all(&s.pir.answer_message(v, &a).encode())?;
        frames += 1;
    }
    Ok(frames)
}

/// Accepts connections (each may carry queries for any server index) and
/// answers them, one thread per connection. Stops after `max` connections.
pub fn serve(listener: TcpListener, served: Arc<Served>, max: Option<usize>) -> CliResult<(usize, usize)> {
    let mut workers = Vec::new();
    let mut conns = 0;
    for stream in listener.incoming() {
        let stream = stream?;
        let s = served.clone();
        workers.push(thread::spawn(move || handle(stream, &s)));
        conns += 1;
        if max.is_some_and(|m| conns >= m) {
            break;
        }
    }
    let mut frames = 0;
    for w in workers {
        frames += w.join().map_err(|_| CliError::invariant("server thread panicked"))??;
    }
    Ok((conns, frames))
}

pub fn serve_cmd(p: &Params) -> CliResult<Outcome> {
    let path = p.db.as_ref().ok_or_else(|| CliError::invalid("missing --db"))?;
    let served = Arc::new(load_served(path)?);
    let addr = p.addr.clone().unwrap_or_else(|| "127.0.0.1:7878".into());
    let listener = TcpListener::bind(&addr)?;
    eprintln!("listening on {}", listener.local_addr()?);
    let (conns, frames) = serve(listener, served, p.requests)?;
    Ok(Outcome::json(json!({ "connections": conns, "frames": frames })))
}

/// One round trip per server, all servers in parallel.
pub fn remote_answers(pir: &Pir, addr: &str, queries: &[Vec<Fe>]) -> CliResult<Vec<Vec<Fe>>> {
    thread::scope(|sc| {
        let handles: Vec<_> = queries
            .iter()
            .enumerate()
            .map(|(v, q)| {
                sc.spawn(move || -> CliResult<Vec<Fe>> {
                    let mut stream = TcpStream::connect(addr)?;
                    stream.write_all(&pir.query_message(v, q).encode())?;
                    let msg = read_frame(&mut stream)?.ok_or_else(|| CliError::invalid("server closed without answering"))?;
                    if msg.server as usize != v {
                        return Err(CliError::invalid("answer from the wrong server"));
                    }
                    Ok(pir.parse_answer(&msg)?)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().map_err(|_| CliError::invariant("client thread panicked"))?).collect()
    })
}

pub fn fetch(p: &Params) -> CliResult<Outcome> {
    let local = p.db.as_ref().map(|path| load_served(path)).transpose()?;
    let owned;
    let pir = match &local {
        Some(s) => &s.pir,
        None => {
            owned = protocol(&params_from(p)?)?;
            &owned
        }
    };
    let index = need(p.index, "index")?;
    if index == 0 || index > pir.params.n {
        return Err(CliError::invalid(format!("--index must lie in 1..={}", pir.params.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed(p));
    let (queries, state) = pir.query(index - 1, &mut rng)?;
    let answers = match (&p.addr, &local) {
        (Some(addr), _) => remote_answers(pir, addr, &queries)?,
        (None, Some(s)) => {
            queries.par_iter().enumerate().map(|(v, q)| s.pir.answer(q, &s.db, v)).collect::<Result<Vec<_>, _>>()?
        }
        (None, None) => return Err(CliError::invalid("give --addr or --db")),
    };
    let record = pir.reconstruct(&state, &answers)?;
    let query_bytes: Vec<usize> = queries.iter().enumerate().map(|(v, q)| pir.query_message(v, q).encode().len()).collect();
    let mut results = json!({
        "index": index,
        "record": bits(&record),
        "record_bits": record.len(),
        "upload_bits": pir.upload_bits(),
        "download_bits": pir.download_bits(),
        "rate": ratio(pir.rate()),
        "query_frame_bytes": query_bytes,
    });
    if let Some(s) = &local {
        let ok = s.records[index - 1] == record;
        results["verified"] = json!(ok);
        if !ok {
            return Err(CliError::invariant(format!("record {index} came back wrong")));
        }
    }
    Ok(Outcome::json(results))
}
