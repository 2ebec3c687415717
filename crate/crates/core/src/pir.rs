//! t-private k-server PIR on top of the Shamir-based HSS: the database is
//! k-dt multilinear degree-d polynomials over F_{2^⌈log2 k⌉}, the client
//! shares the weight-d point η(j), servers evaluate, the client reconstructs.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use rand::{Rng, RngCore};

use crate::combi::{binom, colex_unrank};
use crate::error::{invalid, Result};
use crate::galois::{Fe, FieldCtx};
use crate::hss_poly::{LinearHss, Monomial, Poly, PolyFamily, ShamirHss};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PirParams {
    pub d: usize,
    pub t: usize,
    pub k: usize,
    pub w: usize,
    pub n: usize,
    pub m: usize,
    /// ⌈log2 k⌉, bits per field symbol.
    pub sym_bits: usize,
}

impl PirParams {
    pub fn new(d: usize, t: usize, k: usize, w: usize, n: usize) -> Result<PirParams> {
        if d == 0 || t == 0 || w == 0 || n == 0 {
            return Err(invalid!("d, t, w and N must be positive"));
        }
        if d * t + 1 > k {
            return Err(invalid!("need dt + 1 ≤ k (d={d}, t={t}, k={k})"));
        }
        let mut m = d;
        while binom(m as u64, d as u64) < n as u64 {
            m += 1;
        }
        let sym_bits = (usize::BITS - (k - 1).leading_zeros()).max(1) as usize;
        Ok(PirParams { d, t, k, w, n, m, sym_bits })
    }

    /// k - dt symbols per repetition.
    pub fn ell(&self) -> usize {
        self.k - self.d * self.t
    }

    pub fn record_bits(&self) -> usize {
        self.w * self.ell() * self.sym_bits
    }

    pub fn symbols_per_record(&self) -> usize {
        self.w * self.ell()
    }
}

/// The polynomials p_i (one per record symbol) and the index map η.
#[derive(Clone, Debug)]
pub struct EncodedDb {
    /// coeffs[i][j] = D_{i,j}.
    pub coeffs: Vec<Vec<Fe>>,
    pub family: PolyFamily,
}

impl EncodedDb {
    /// p_i evaluated at an arbitrary point of F^m.
    pub fn eval(&self, f: &FieldCtx, i: usize, z: &[Fe]) -> Fe {
        self.family.polys[i].eval(f, z)
    }
}

/// η(j): the j-th weight-d subset of the m variables in colex order.
pub fn eta(j: usize, d: usize) -> Vec<usize> {
    colex_unrank(j as u64, d)
}

pub struct Pir {
    pub params: PirParams,
    pub hss: ShamirHss,
}

/// Client-side context between query and reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClientState {
    pub index: usize,
}

impl Pir {
    pub fn new(params: PirParams) -> Result<Pir> {
        let f = FieldCtx::shared(2, params.sym_bits as u32)?;
        let mut hss = ShamirHss::repeated(params.t, params.k, params.d, params.m, f, 1, params.w)?;
        hss.shared = true;
        Ok(Pir { params, hss })
    }

    pub fn field(&self) -> &FieldCtx {
        self.hss.field()
    }

    /// Splits a record (one bit per byte, 0 or 1) into field symbols, little-endian.
    pub fn record_symbols(&self, bits: &[u8]) -> Result<Vec<Fe>> {
        let p = &self.params;
        if bits.len() != p.record_bits() || bits.iter().any(|&b| b > 1) {
            return Err(invalid!("record must be exactly {} bits", p.record_bits()));
        }
        Ok(bits.chunks(p.sym_bits).map(|c| c.iter().enumerate().fold(0, |a, (i, &b)| a | (b as Fe) << i)).collect())
    }

    pub fn symbols_to_bits(&self, syms: &[Fe]) -> Vec<u8> {
        syms.iter().flat_map(|&s| (0..self.params.sym_bits).map(move |i| (s >> i & 1) as u8)).collect()
    }

    pub fn encode_db(&self, records: &[Vec<u8>]) -> Result<EncodedDb> {
        let p = &self.params;
        if records.len() != p.n {
            return Err(invalid!("expected {} records, got {}", p.n, records.len()));
        }
        let syms: Vec<Vec<Fe>> = records.iter().map(|r| self.record_symbols(r)).collect::<Result<_>>()?;
        let coeffs: Vec<Vec<Fe>> = (0..p.symbols_per_record()).map(|i| syms.iter().map(|s| s[i]).collect()).collect();
        let polys = coeffs
            .iter()
            .map(|row| Poly {
                terms: row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| Monomial { coeff: c, vars: eta(j, p.d) })
                    .collect(),
            })
            .collect();
        Ok(EncodedDb { coeffs, family: PolyFamily { m: p.m, polys } })
    }

    /// The 0/1 point η(j) in F^m.
    pub fn point(&self, index: usize) -> Vec<Fe> {
        let mut z = vec![0; self.params.m];
        for v in eta(index, self.params.d) {
            z[v] = 1;
        }
        z
    }

    /// Query payloads (m E-elements per server) from explicit randomness.
    pub fn query_with(&self, index: usize, rand: &[Fe]) -> Result<(Vec<Vec<Fe>>, ClientState)> {
        if index >= self.params.n {
            return Err(invalid!("index {index} outside 0..{}", self.params.n));
        }
        if rand.len() != self.hss.rand_len() {
            return Err(invalid!("need {} random symbols", self.hss.rand_len()));
        }
        let shares = self.hss.share(&self.point(index), rand);
        let payloads = shares.into_iter().map(|per| per.into_iter().map(|s| s[0]).collect()).collect();
        Ok((payloads, ClientState { index }))
    }

    pub fn query(&self, index: usize, rng: &mut impl RngCore) -> Result<(Vec<Vec<Fe>>, ClientState)> {
        let q = self.hss.ext_field().order();
        let rand: Vec<Fe> = (0..self.hss.rand_len()).map(|_| rng.gen_range(0..q)).collect();
        self.query_with(index, &rand)
    }

    /// Server v's answer: w F-symbols.
    pub fn answer(&self, query: &[Fe], db: &EncodedDb, server: usize) -> Result<Vec<Fe>> {
        let q = self.hss.ext_field().order();
        if query.len() != self.params.m || query.iter().any(|&s| s >= q) {
            return Err(invalid!("query must be {} elements of {}", self.params.m, self.hss.ext_field().id()));
        }
        if server >= self.params.k {
            return Err(invalid!("server {server} outside 0..{}", self.params.k));
        }
        let shares: Vec<Vec<Fe>> = query.iter().map(|&s| vec![s]).collect();
        Ok(self.hss.eval(&db.family, server, &shares))
    }

    /// Record bits from all k answers.
    pub fn reconstruct(&self, _state: &ClientState, answers: &[Vec<Fe>]) -> Result<Vec<u8>> {
        if answers.len() != self.params.k || answers.iter().any(|a| a.len() != self.params.w) {
            return Err(invalid!("need {} answers of {} symbols", self.params.k, self.params.w));
        }
        Ok(self.symbols_to_bits(&self.hss.rec(answers)))
    }

    /// Bits per server query.
    pub fn query_bits(&self) -> usize {
        self.params.m * self.hss.ext_field().s() as usize
    }

    pub fn upload_bits(&self) -> usize {
        self.params.k * self.query_bits()
    }

    pub fn answer_bits(&self) -> usize {
        self.params.w * self.params.sym_bits
    }

    pub fn download_bits(&self) -> usize {
        self.params.k * self.answer_bits()
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.params.record_bits() as u64, self.download_bits() as u64)
    }
}

pub const MAGIC: &[u8; 4] = b"HPIR";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Query = 0,
    Answer = 1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PirMessage {
    pub direction: Direction,
    pub server: u16,
    pub payload: Vec<u8>,
}

/// Packs symbols of `bits` bits each, little-endian bit order, zero-padded.
pub fn pack_symbols(syms: &[Fe], bits: usize) -> Vec<u8> {
    let mut out = vec![0u8; (syms.len() * bits).div_ceil(8)];
    for (i, &s) in syms.iter().enumerate() {
        for b in 0..bits {
            if s >> b & 1 == 1 {
                let pos = i * bits + b;
                out[pos / 8] |= 1 << (pos % 8);
            }
        }
    }
    out
}

pub fn unpack_symbols(bytes: &[u8], bits: usize, count: usize) -> Result<Vec<Fe>> {
    if bytes.len() != (count * bits).div_ceil(8) {
        return Err(invalid!("payload of {} bytes does not hold {count} symbols of {bits} bits", bytes.len()));
    }
    Ok((0..count)
        .map(|i| (0..bits).fold(0, |a, b| {
            let pos = i * bits + b;
            a | ((bytes[pos / 8] >> (pos % 8) & 1) as Fe) << b
        }))
        .collect())
}

impl PirMessage {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.direction as u8);
        out.extend_from_slice(&self.server.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Payload length announced by a header.
    pub fn payload_len(header: &[u8]) -> Result<usize> {
        if header.len() < HEADER_LEN || &header[..4] != MAGIC {
            return Err(invalid!("bad frame magic"));
        }
        if header[4] != VERSION {
            return Err(invalid!("unsupported frame version {}", header[4]));
        }
        Ok(u32::from_le_bytes([header[8], header[9], header[10], header[11]]) as usize)
    }

    pub fn decode(bytes: &[u8]) -> Result<PirMessage> {
        let len = PirMessage::payload_len(bytes)?;
        if bytes.len() != HEADER_LEN + len {
            return Err(invalid!("frame length {} does not match header ({len} payload bytes)", bytes.len()));
        }
        let direction = match bytes[5] {
            0 => Direction::Query,
            1 => Direction::Answer,
            x => return Err(invalid!("bad direction byte {x}")),
        };
        Ok(PirMessage { direction, server: u16::from_le_bytes([bytes[6], bytes[7]]), payload: bytes[HEADER_LEN..].to_vec() })
    }
}

impl Pir {
    /// E-elements are framed as their bit encodings (ℓ̃ ⌈log2 k⌉ bits).
    pub fn query_message(&self, server: usize, query: &[Fe]) -> PirMessage {
        let bits = self.hss.ext_field().s() as usize;
        PirMessage { direction: Direction::Query, server: server as u16, payload: pack_symbols(query, bits) }
    }

    pub fn parse_query(&self, msg: &PirMessage) -> Result<Vec<Fe>> {
        if msg.direction != Direction::Query {
            return Err(invalid!("expected a query frame"));
        }
        unpack_symbols(&msg.payload, self.hss.ext_field().s() as usize, self.params.m)
    }

    pub fn answer_message(&self, server: usize, answer: &[Fe]) -> PirMessage {
        PirMessage { direction: Direction::Answer, server: server as u16, payload: pack_symbols(answer, self.params.sym_bits) }
    }

    pub fn parse_answer(&self, msg: &PirMessage) -> Result<Vec<Fe>> {
        if msg.direction != Direction::Answer {
            return Err(invalid!("expected an answer frame"));
        }
        unpack_symbols(&msg.payload, self.params.sym_bits, self.params.w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::for_each_combination;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_db(pir: &Pir, seed: u64) -> Vec<Vec<u8>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..pir.params.n).map(|_| (0..pir.params.record_bits()).map(|_| rng.gen_range(0..2)).collect()).collect()
    }

    #[test]
    fn params() {
        let p = PirParams::new(2, 1, 5, 1, 100).unwrap();
        assert_eq!((p.m, p.sym_bits, p.ell(), p.record_bits()), (15, 3, 3, 9));
        assert_eq!(PirParams::new(2, 1, 5, 1, 25).unwrap().m, 8);
        assert_eq!(PirParams::new(2, 1, 5, 1, 400).unwrap().m, 29);
        assert_eq!(PirParams::new(2, 1, 4, 1, 6).unwrap().m, 4);
        assert!(PirParams::new(2, 2, 4, 1, 6).is_err());
    }

    #[test]
    fn encoding_reproduces_records() {
        let pir = Pir::new(PirParams::new(2, 1, 4, 1, 6).unwrap()).unwrap();
        let db = random_db(&pir, 1);
        let enc = pir.encode_db(&db).unwrap();
        let etas: Vec<Vec<usize>> = (0..6).map(|j| eta(j, 2)).collect();
        assert_eq!(etas, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        for j in 0..6 {
            let z = pir.point(j);
            let got: Vec<Fe> = (0..pir.params.ell()).map(|i| enc.eval(pir.field(), i, &z)).collect();
            assert_eq!(got, pir.record_symbols(&db[j]).unwrap());
        }
        let zero = pir.encode_db(&vec![vec![0; pir.params.record_bits()]; 6]).unwrap();
        assert!(zero.family.polys.iter().all(|p| p.terms.is_empty()));
        assert!(pir.encode_db(&db[..5]).is_err());
    }

    #[test]
    fn end_to_end_every_index() {
        let pir = Pir::new(PirParams::new(2, 1, 5, 1, 10).unwrap()).unwrap();
        assert_eq!(pir.rate(), Ratio::new(3, 5));
        let db = random_db(&pir, 2);
        let enc = pir.encode_db(&db).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for j in 0..10 {
            let (qs, st) = pir.query(j, &mut rng).unwrap();
            let ans: Vec<Vec<Fe>> = (0..5).map(|v| pir.answer(&qs[v], &enc, v).unwrap()).collect();
            assert_eq!(pir.reconstruct(&st, &ans).unwrap(), db[j]);
            assert_eq!(pir.answer(&qs[0], &enc, 0).unwrap(), ans[0]);
        }
        assert_eq!(pir.download_bits(), 15);
        assert_eq!(pir.query_bits(), pir.params.m * 3 * 3);
        assert!(pir.query(10, &mut rng).is_err());
    }

    #[test]
    fn repeated_records() {
        let pir = Pir::new(PirParams::new(1, 1, 3, 3, 4).unwrap()).unwrap();
        assert_eq!(pir.params.record_bits(), 3 * 2 * 2);
        assert_eq!(pir.download_bits(), 3 * 3 * 2);
        let db = random_db(&pir, 4);
        let enc = pir.encode_db(&db).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for j in 0..4 {
            let (qs, st) = pir.query(j, &mut rng).unwrap();
            let ans: Vec<Vec<Fe>> = (0..3).map(|v| pir.answer(&qs[v], &enc, v).unwrap()).collect();
            assert_eq!(pir.reconstruct(&st, &ans).unwrap(), db[j]);
        }
    }

    #[test]
    fn zero_db_zero_answers() {
        let pir = Pir::new(PirParams::new(1, 1, 3, 1, 3).unwrap()).unwrap();
        let enc = pir.encode_db(&vec![vec![0; 4]; 3]).unwrap();
        let (qs, _) = pir.query_with(1, &vec![0; pir.hss.rand_len()]).unwrap();
        for v in 0..3 {
            assert_eq!(pir.answer(&qs[v], &enc, v).unwrap(), vec![0]);
        }
    }

    #[test]
    fn single_server_views_match_across_indices() {
        // k=3, d=1, t=1, N=3 over F_4 with shares in F_16: every randomness value
        let pir = Pir::new(PirParams::new(1, 1, 3, 1, 3).unwrap()).unwrap();
        assert_eq!(pir.hss.ext_field().order(), 16);
        let e = pir.hss.ext_field().clone();
        let n = pir.hss.rand_len();
        for server in 0..3 {
            let mut reference: Option<Vec<Vec<Fe>>> = None;
            for j in 0..3 {
                let mut views = Vec::new();
                let units: Vec<Vec<Fe>> = (0..n * 4).map(|c| {
                    let mut r = vec![0; n];
                    r[c / 4] = 1 << (c % 4);
                    r
                }).collect();
                for_each_combination(&e, &vec![0; n], &units, |r| {
                    let (qs, _) = pir.query_with(j, r).unwrap();
                    views.push(qs[server].clone());
                });
                views.sort();
                assert_eq!(views.len(), 4096);
                match &reference {
                    None => reference = Some(views),
                    Some(r) => assert_eq!(r, &views),
                }
            }
        }
    }

    #[test]
    fn framing_round_trip() {
        let pir = Pir::new(PirParams::new(2, 1, 5, 1, 100).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (qs, _) = pir.query(17, &mut rng).unwrap();
        let msg = pir.query_message(2, &qs[2]);
        let bytes = msg.encode();
        assert_eq!(&bytes[..4], b"HPIR");
        assert_eq!(bytes.len(), HEADER_LEN + (15 * 9usize).div_ceil(8));
        let back = PirMessage::decode(&bytes).unwrap();
        assert_eq!(back, msg);
        assert_eq!(pir.parse_query(&back).unwrap(), qs[2]);
        assert!(pir.parse_answer(&back).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(PirMessage::decode(&bad).is_err());
        assert!(PirMessage::decode(&bytes[..bytes.len() - 1]).is_err());
        assert_eq!(pack_symbols(&[5, 1], 3), vec![0b001101]);
        assert_eq!(unpack_symbols(&[0b001101], 3, 2).unwrap(), vec![5, 1]);
    }
}
