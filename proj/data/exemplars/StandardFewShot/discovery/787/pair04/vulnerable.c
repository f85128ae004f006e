void read_header(struct packet *pkt)
{
    unsigned char hdr[8];
    if (pkt->len == 0)
        return;
    memcpy(hdr, pkt->data, pkt->len);
    parse_header(hdr);
}
