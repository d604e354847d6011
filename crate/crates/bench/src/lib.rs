//! Shared inputs for the codec benchmarks.

use nr_fec::sim::{bpsk_llr, random_bits, Link};
use nr_fec::{Assets, ChainSpec, ChannelConfig};

/// One link with a fixed payload and one noisy observation of its codeword.
pub struct Fixture {
    pub link: Link,
    pub payload: Vec<u8>,
    pub llrs: Vec<f64>,
}

impl Fixture {
    pub fn new(assets: &Assets, spec: &ChainSpec, ebn0_db: f64) -> Self {
        let link = Link::build(assets, spec).expect("benchmark chain");
        let payload = random_bits(link.payload_len(), 1, 0);
        let coded = match &link {
            Link::Ldpc(c, _) => c.transmit(&payload),
            Link::Polar(c, _) => c.transmit(&payload),
        }
        .expect("encode");
        let channel = ChannelConfig {
            ebn0_db,
            code_rate: link.code_rate(),
            seed: 1,
        };
        let llrs = bpsk_llr(&coded, &channel, 0).into_inner();
        Self {
            link,
            payload,
            llrs,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match &self.link {
            Link::Ldpc(c, _) => c.transmit(&self.payload),
            Link::Polar(c, _) => c.transmit(&self.payload),
        }
        .expect("encode")
    }

    /// Decodes the stored observation; true when the payload CRC passed.
    pub fn decode(&self) -> bool {
        match &self.link {
            Link::Ldpc(c, cfg) => c.receive(&self.llrs, cfg).expect("decode").tb_crc_ok,
            Link::Polar(c, cfg) => c.receive(&self.llrs, cfg).expect("decode").crc_ok,
        }
    }
}
