int has_magic(const char *buf, size_t buf_len)
{
    if (buf_len < 5)
        return 0;
    return memcmp(buf, "MAGIC", 5) == 0;
}
