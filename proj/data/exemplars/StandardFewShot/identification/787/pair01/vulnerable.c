void copy_name(char *dst_out, const char *src, size_t len)
{
    char buf[16];
    if (len > 16)
        return;
    for (size_t i = 0; i <= len; i++)
        buf[i] = src[i];
    memcpy(dst_out, buf, len);
}
