int read_range(struct file *f, size_t off, size_t len, char *dst)
{
    if (len > f->size || off > f->size - len)
        return -1;
    memcpy(dst, f->data + off, len);
    return 0;
}
