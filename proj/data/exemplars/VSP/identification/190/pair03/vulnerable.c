int read_range(struct file *f, size_t off, size_t len, char *dst)
{
    if (off + len > f->size)
        return -1;
    memcpy(dst, f->data + off, len);
    return 0;
}
